#pragma once

#include <functional>
#include <vector>

namespace d4dr {

// Runs the tasks on up to `jobs` worker threads (anything below 2 runs them
// in order on the calling thread). All tasks are joined before returning; the
// exception of the lowest-indexed failing task is rethrown.
void run_parallel(const std::vector<std::function<void()>>& tasks, int jobs);

}  // namespace d4dr
