#pragma once

namespace outerspine {

/// Hard cutoff (in cyclically reduced class length) for streamed
/// lexicographic comparisons.  Comparisons that remain undecided past this
/// length throw UndeterminedComparison instead of guessing.  The default is
/// 12 and can be overridden with the OUTERSPINE_LMAX environment variable or
/// per call.
int default_lmax();

/// Iteration cap for the crossing-elimination loop of the retraction
/// pipeline; exceeding it raises PipelineDefect.
inline constexpr int kDefaultPipelineIterationCap = 1024;

}  // namespace outerspine
