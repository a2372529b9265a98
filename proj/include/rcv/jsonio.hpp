#pragma once

#include <json.hpp>

#include "rcv/oracle.hpp"
#include "rcv/rewrite.hpp"
#include "rcv/verify.hpp"
#include "rcv/wellformed.hpp"

namespace rcv {

// Stable structural encodings; object keys serialize sorted.
nlohmann::json type_json(const Type& t);
nlohmann::json expr_json(const Expr& e);
nlohmann::json subst_json(const Subst& s);
nlohmann::json prog_json(const RProg& p);
nlohmann::json machine_json(const StMach& m);
nlohmann::json wf_json(const WfReport& r);
nlohmann::json rewrite_json(const RewriteResult& r);
nlohmann::json observation_json(const Observation& o);
nlohmann::json deadlock_json(const DeadlockResult& d);
nlohmann::json report_json(const Report& r);

// Typed decoding of domain values: booleans and integers as themselves,
// enum constructors as strings, abstract tokens as indices, sequences as
// arrays. Throws ConfigError on mismatch.
Value value_from_json(const Type& t, const nlohmann::json& j);
// {"entries": [{"args": [...], "result": ...}], "default": ...}
FunTable table_from_json(const FunSig& sig, const nlohmann::json& j);

}  // namespace rcv
