#pragma once

#include <stdexcept>
#include <string>

namespace spikebasis {

/// Matrix failed the scale-aware invertibility test, so no basis exists.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// A cofactor identity was requested at an (i, j) whose minor is singular.
class SingularMinorError : public std::runtime_error {
public:
    explicit SingularMinorError(const std::string& what) : std::runtime_error(what) {}
};

/// Constructor parameters violate a nondegeneracy requirement.
class DegenerateParametersError : public std::invalid_argument {
public:
    explicit DegenerateParametersError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation restricted to orthonormal bases received something else.
class NotOrthonormalError : public std::invalid_argument {
public:
    explicit NotOrthonormalError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation restricted to volume-preserving bases (|det| = 1)
/// received something else.
class NotVolumePreservingError : public std::invalid_argument {
public:
    explicit NotVolumePreservingError(const std::string& what) : std::invalid_argument(what) {}
};

/// A differential-entropy quantity was requested for a marginal that has a
/// point mass (some cofactor vanishes), where it is not defined.
class AtomicMarginalError : public std::domain_error {
public:
    explicit AtomicMarginalError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace spikebasis
