#pragma once

// Derived schemas used by the verifier's control and mutation cases.

#include <vector>

#include "nsub/schema.hpp"

namespace nsub {

/// Drops the regime and removes it from every signature; signatures left
/// with an empty endpoint set are dropped.
SubstrateSchema without_regime(const SubstrateSchema& schema, const RegimeId& id);

/// Replaces the regimes of `block` with one regime named by joining their
/// ids with '+'. The merged regime takes the union of capabilities and the
/// persistence class of the first member (in id order); signature endpoints
/// are rewritten to the merged id.
SubstrateSchema merge_regimes(const SubstrateSchema& schema, const std::vector<RegimeId>& block);

RegimeId merged_regime_id(const std::vector<RegimeId>& block);

/// Adds `clone` with the persistence, capabilities and signature rows of
/// `source`.
SubstrateSchema with_clone(const SubstrateSchema& schema, const RegimeId& source, const RegimeId& clone);

enum class SignatureSide { Source, Target };

/// Adds `regime` to one endpoint set of every signature for `rel`.
SubstrateSchema widen_signature(const SubstrateSchema& schema, RelationType rel, SignatureSide side,
                                const RegimeId& regime);

}  // namespace nsub
