#pragma once

#include <gmpxx.h>

#include <vector>

namespace hetfb::detail {

const std::vector<mpq_class>& xi1_exact(unsigned num_rb, unsigned feedback_m);

// Power coefficients by the recurrence; Errc::domain when xi1(N,M,0) = 0.
std::vector<mpq_class> xi2_recursion_exact(unsigned num_rb, unsigned feedback_m, unsigned tau);
std::vector<mpq_class> xi2_convolution_exact(unsigned num_rb, unsigned feedback_m, unsigned tau);

// Cached; recurrence when possible, convolution otherwise.
const std::vector<mpq_class>& xi2_exact(unsigned num_rb, unsigned feedback_m, unsigned tau);

}  // namespace hetfb::detail
