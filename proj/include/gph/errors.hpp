#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gph {

// Thrown when a dense tensor would exceed the entry cap.  Carries the
// required allocation so callers can report it.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::size_t required_entries, std::size_t cap_entries)
      : std::runtime_error("dense tensor needs " +
                           std::to_string(required_entries) + " entries (" +
                           std::to_string(required_entries * 16) +
                           " bytes), cap is " + std::to_string(cap_entries) +
                           " entries; raise GPH_MEM_CAP to override"),
        required(required_entries),
        cap(cap_entries) {}

  std::size_t required;
  std::size_t cap;
};

// Integration blew up (NaN/Inf or amplitude runaway); carries the time stamp.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), t(time) {}
  double t;
};

// Default cap: 2^27 complex entries.  GPH_MEM_CAP (entries) overrides.
std::size_t mem_cap_entries();

void check_capacity(std::size_t required_entries);

}  // namespace gph
