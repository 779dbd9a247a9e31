#include "outerspine/options.hpp"

#include <cstdlib>
#include <string>

namespace outerspine {

int default_lmax() {
    static const int value = [] {
        if (const char* env = std::getenv("OUTERSPINE_LMAX")) {
            try {
                int v = std::stoi(env);
                if (v >= 2) return v;
            } catch (...) {
            }
        }
        return 12;
    }();
    return value;
}

}  // namespace outerspine
