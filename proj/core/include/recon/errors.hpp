#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recon {

/// Base of every engine error. `code()` is the machine-readable name the
/// service returns in its 400 bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define RECON_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

RECON_DEFINE_ERROR(ParseError);
RECON_DEFINE_ERROR(ValidationError);
RECON_DEFINE_ERROR(RangeError);
RECON_DEFINE_ERROR(ConfigError);
RECON_DEFINE_ERROR(NoPathError);
RECON_DEFINE_ERROR(GeometryError);
RECON_DEFINE_ERROR(DomainError);
RECON_DEFINE_ERROR(EmptyAreaError);
RECON_DEFINE_ERROR(InfeasibleError);
RECON_DEFINE_ERROR(UnreachableError);
RECON_DEFINE_ERROR(SyncError);
RECON_DEFINE_ERROR(ConstraintError);
RECON_DEFINE_ERROR(SerializationError);
RECON_DEFINE_ERROR(NotFoundError);

#undef RECON_DEFINE_ERROR

}  // namespace recon
