#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace closurium {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Elements of two distinct algebras were mixed in one lattice operation.
struct algebra_mismatch : error {
  algebra_mismatch() : error("algebra mismatch: elements belong to different algebras") {}
  explicit algebra_mismatch(const std::string& what) : error(what) {}
};

// An enumeration or search would exceed the configured cap.
struct too_large : error {
  std::size_t requested = 0;
  std::size_t cap = 0;
  too_large(std::size_t requested_, std::size_t cap_)
      : error("size " + std::to_string(requested_) + " exceeds cap " + std::to_string(cap_)),
        requested(requested_), cap(cap_) {}
};

struct unsupported : error {
  using error::error;
};

struct validation_error : error {
  using error::error;
};

struct syntax_error : error {
  std::size_t offset = 0;
  syntax_error(const std::string& what, std::size_t offset_)
      : error(what + " at offset " + std::to_string(offset_)), offset(offset_) {}
};

struct unknown_atom : error {
  std::string atom;
  explicit unknown_atom(const std::string& name)
      : error("unknown atom: " + name), atom(name) {}
};

struct unknown_sort : error {
  std::string sort;
  explicit unknown_sort(const std::string& name)
      : error("unknown sort: " + name), sort(name) {}
};

// A derivation node does not match its rule schema. `path` is the chain of
// premise indices from the root, e.g. "0.1".
struct rule_violation : error {
  std::string path;
  std::string reason;
  rule_violation(const std::string& path_, const std::string& reason_)
      : error("rule violation at node [" + (path_.empty() ? std::string("root") : path_) +
              "]: " + reason_),
        path(path_), reason(reason_) {}
};

} // namespace closurium
