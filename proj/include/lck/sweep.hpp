#pragma once

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace lck {

/// Execution policy for per-sample kernels. `serial` is the reference path.
enum class Exec { serial, parallel };

namespace sweep {

///
/// out[i] = f(i) for i in [0, count).
///
/// The parallel path splits the index range across OpenMP threads; results are
/// written by index so the output is identical to the serial path. If any call
/// throws, the exception of the lowest failing index is rethrown.
///
template <class F>
auto map_indexed(std::size_t count, F&& f, Exec exec = Exec::parallel)
    -> std::vector<std::invoke_result_t<F&, std::size_t>>
{
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(count);
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }

    std::size_t first_error = count;
    std::exception_ptr error;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = f(k);
        } catch (...) {
#pragma omp critical(lck_sweep_error)
            {
                if (k < first_error) {
                    first_error = k;
                    error = std::current_exception();
                }
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

/// Index of the largest value; ties resolve to the lowest index. NaN counts as largest.
template <class T>
std::size_t argmax(const std::vector<T>& v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[best] != v[best]) break;
        if (v[i] != v[i] || v[i] > v[best]) best = i;
    }
    return best;
}

} // namespace sweep
} // namespace lck
