#ifndef MCRD_CORE_ERRORS_HPP
#define MCRD_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcrd {

// Failure categories; the C API maps these 1:1 onto status codes.
enum class errc {
  io,
  malformed_input,
  shape_mismatch,
  bad_config,
  domain,
  insufficient_data,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace mcrd

#endif
