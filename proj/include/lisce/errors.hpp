// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lisce {

/// Argument outside an operation's domain (negative variance, zero pilot length, ...).
class invalid_parameter_error : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Containers that must agree in length do not.
class dimension_error : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A dense solve was rejected by the scale-aware determinant guard.
class singular_matrix_error : public std::runtime_error {
   public:
    singular_matrix_error(const std::string& what, double abs_det)
        : std::runtime_error(what), abs_det_(abs_det) {}

    double abs_det() const noexcept { return abs_det_; }

   private:
    double abs_det_;
};

/// A result table is missing rows required for a derived quantity.
class incomplete_data_error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace lisce
