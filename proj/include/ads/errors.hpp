#pragma once

#include <stdexcept>
#include <string>

namespace ads {

// Error taxonomy. Data-shaped failures map to CLI exit code 2,
// remote-service failures to exit code 3.
enum class Errc {
  malformed_line,
  duplicate_id,
  empty_corpus,
  empty_dataset,
  empty_input,
  empty_article,
  dimension_mismatch,
  k_too_large,
  invalid_k,
  embedding_failure,
  id_collision,
  length_mismatch,
  missing_prediction,
  no_summaries,
  too_many_clusters,
  too_few_sentences,
  missing_provenance,
  io_error,
  service_unreachable,
  bad_response,
  timeout,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

  bool is_service_error() const noexcept {
    return code_ == Errc::service_unreachable || code_ == Errc::bad_response ||
           code_ == Errc::timeout;
  }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ads
