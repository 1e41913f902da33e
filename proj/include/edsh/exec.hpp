#pragma once

#include <exception>
#include <vector>

#include <omp.h>

namespace edsh {

// Serial is the reference path; Parallel must produce identical results.
enum class Exec { Serial, Parallel };

// Runs body(i) for i in [0, count). Under Parallel the iterations are spread
// over OpenMP threads; the first exception (lowest index) is rethrown after
// the loop, so both paths fail the same way.
template <class Body>
void for_each_index(long count, Exec exec, Body&& body) {
    std::vector<std::exception_ptr> errors(static_cast<size_t>(count > 0 ? count : 0));
    if (exec == Exec::Parallel && count > 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (long i = 0; i < count; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace edsh
