#ifndef IVFS_EXECUTION_HPP
#define IVFS_EXECUTION_HPP

namespace ivfs {

/// Serial runs the reference loops; Parallel runs the OpenMP kernels.
/// Both produce bit-identical results.
enum class Execution { Serial, Parallel };

struct Parallelism {
  Execution mode = Execution::Parallel;
  int threads = 0;  // 0 = OpenMP default
};

inline constexpr Parallelism kSerial{Execution::Serial, 1};

}  // namespace ivfs

#endif  // IVFS_EXECUTION_HPP
