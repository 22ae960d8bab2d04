#pragma once

#include <stdexcept>
#include <string>

namespace qho {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateResonance : std::domain_error {
    using std::domain_error::domain_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateCoupling : std::domain_error {
    using std::domain_error::domain_error;
};

struct SingularForm : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonHermitianInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qho
