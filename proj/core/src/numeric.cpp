#include "psqm/numeric.hpp"

#include <cstdlib>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "psqm/errors.hpp"

namespace psqm {

namespace {

struct PrecisionInit {
  PrecisionInit() {
    try {
      set_working_digits(digits_from_environment());
    } catch (const Error&) {
      Real::default_precision(kDefaultWorkingDigits);
    }
  }
};
const PrecisionInit g_precision_init;

}  // namespace

void set_working_digits(unsigned digits) {
  if (digits < 17 || digits > 2000) {
    raise(ErrorKind::ConfigInvalid, "precision digits must lie in [17, 2000], got " + std::to_string(digits));
  }
  Real::default_precision(digits);
}

unsigned working_digits() { return Real::default_precision(); }

unsigned digits_from_environment() {
  const char* env = std::getenv(kPrecisionEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultWorkingDigits;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 17 || v > 2000) {
    raise(ErrorKind::ConfigInvalid, std::string(kPrecisionEnvVar) + " must be an integer in [17, 2000]");
  }
  return static_cast<unsigned>(v);
}

Real hp_pi() { return boost::math::constants::pi<Real>(); }

}  // namespace psqm
