#pragma once

#include <stdexcept>
#include <string>

namespace roughcb
{
    // Argument outside the mathematical domain of a function (pole, negative
    // Laplace variable, probability outside (0,1), ...).
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // A model or discretization that cannot be instantiated with the given
    // parameters (e.g. gamma_n <= 0 for the chosen level n).
    class ParameterError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // A statistical estimate that cannot be formed from the data at hand.
    class EstimationError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A per-path identity of the simulation engine was violated.
    class InvariantViolation : public std::logic_error
    {
    public:
        using std::logic_error::logic_error;
    };
}
