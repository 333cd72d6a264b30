#ifndef LOGLAP_VERSION_HPP
#define LOGLAP_VERSION_HPP

namespace loglap {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace loglap

#endif  // LOGLAP_VERSION_HPP
