#ifndef HSCOV_ERRORS_HPP
#define HSCOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hscov {

// Thrown where a derivative is requested at a point that has none
// (the quasi operator on the set <z,e1> = <z,e2> = 0).
class not_differentiable : public std::domain_error {
public:
    explicit not_differentiable(const std::string& what) : std::domain_error(what) {}
};

// Thrown when an input or an evaluation produces NaN/Inf.
class non_finite_error : public std::runtime_error {
public:
    explicit non_finite_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hscov

#endif
