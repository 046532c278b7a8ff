#pragma once

#include <stdexcept>
#include <string>

namespace msr {

/// Invalid argument or parameter outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A location fell outside the region on which a tabulated quantity is defined.
class OutOfDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A set of nodes or columns failed to span the space it must span.
class RankDeficiencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A hypothesis that an operation checks itself does not hold.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical certificate that is guaranteed by theory came out false.
/// Seeing one of these means a bug (or a falsified inequality).
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace msr
