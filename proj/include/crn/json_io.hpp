#pragma once

#include <json.hpp>

#include "crn/cbn.hpp"
#include "crn/moments.hpp"
#include "crn/network.hpp"

namespace crn {

struct SchemaError : CrnError {
  using CrnError::CrnError;
};

using Json = nlohmann::json;  // std::map-backed objects: keys always sorted

Json rational_to_json(const Rational& x);
Rational rational_from_json(const Json& j);

Json network_to_json(const ReactionNetwork& net);
ReactionNetwork network_from_json(const Json& j);

Json stoich_to_json(const StoichMatrix& g);
StoichMatrix stoich_from_json(const Json& j);

Json conservation_to_json(const ConservationBasis& b);
ConservationBasis conservation_from_json(const Json& j);

Json moment_system_to_json(const LinearMomentSystem& sys);
LinearMomentSystem moment_system_from_json(const Json& j);

Json partition_table_to_json(const PartitionTable& t);
PartitionTable partition_table_from_json(const Json& j);

Json distribution_to_json(const ConditionalDistributionT<Rational>& d);
Json ffn_to_json(const FfnResult& f);

/// Canonical text: sorted keys, 2-space indent, trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace crn
