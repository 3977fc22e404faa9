#ifndef ELLFM_ERRORS_HPP
#define ELLFM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ellfm
{

/// Base class of every exception thrown by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A theta denominator fell below the pole threshold.
class pole_error : public error
{
public:
    using error::error;
};

/// Malformed configuration label or weight-function partition.
class label_error : public error
{
public:
    using error::error;
};

/// An operation was called outside its stated precondition.
class precondition_error : public error
{
public:
    using error::error;
};

/// Bad argument value (out-of-range color, x = 0 in the multiplicative theta, ...).
class domain_error : public error
{
public:
    using error::error;
};

/// The state sum would exceed the configured contraction budget.
class size_error : public error
{
public:
    using error::error;
};

/// The parameter sampler could not find a well-conditioned draw.
class conditioning_error : public error
{
public:
    using error::error;
};

/// Quantities that must agree across probe points did not.
class inconsistent_error : public error
{
public:
    using error::error;
};

} // namespace ellfm

#endif
