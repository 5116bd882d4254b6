#include "confassist/error.hpp"

namespace confassist {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_document: return "invalid-document";
    case ErrorCode::schema_violation: return "schema-violation";
    case ErrorCode::duplicate_id: return "duplicate-id";
    case ErrorCode::reserved_name: return "reserved-name";
    case ErrorCode::empty_collection: return "empty-collection";
    case ErrorCode::invalid_reference: return "invalid-reference";
    case ErrorCode::protocol: return "protocol";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::storage: return "storage";
  }
  return "unknown";
}

}  // namespace confassist
