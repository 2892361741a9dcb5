#pragma once

namespace colexforge {

/// Resolves a requested thread count: values <= 0 mean the OpenMP default.
int resolve_threads(int requested);

}  // namespace colexforge
