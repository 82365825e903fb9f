// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

namespace lisce {

using cplx = std::complex<double>;

}  // namespace lisce
