#ifndef PHEAP_ERRORS_HPP
#define PHEAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pheap {

enum class errc {
  empty_heap,
  duplicate_key,
  not_a_root,
  self_link,
  invalid_handle,
  key_not_decreased,
  key_not_in_table,
  invalid_policy,
  parse_error,
  invariant_violation,
  not_analysis_order,
  unsupported_op,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_heap: return "EmptyHeap";
    case errc::duplicate_key: return "DuplicateKey";
    case errc::not_a_root: return "NotARoot";
    case errc::self_link: return "SelfLink";
    case errc::invalid_handle: return "InvalidHandle";
    case errc::key_not_decreased: return "KeyNotDecreased";
    case errc::key_not_in_table: return "KeyNotInTable";
    case errc::invalid_policy: return "InvalidPolicy";
    case errc::parse_error: return "ParseError";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::not_analysis_order: return "NotAnalysisOrder";
    case errc::unsupported_op: return "UnsupportedOp";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw error(code, what);
}

}  // namespace pheap

#endif  // PHEAP_ERRORS_HPP
