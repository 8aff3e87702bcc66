#pragma once
#include <string>

#include "dq/graph.hpp"

namespace dq {

struct CanonicalForm {
  std::string hash;
  long aut = 1;
};

// Canonical encoding of the isomorphism class together with the exact
// automorphism count.  Isomorphic graphs (vertex relabelings preserving kind,
// arity, observable label, and leg counts) share the hash.
CanonicalForm canonicalize(const FeynmanGraph& g);

std::string canonical_hash(const FeynmanGraph& g);
long automorphisms(const FeynmanGraph& g);

}  // namespace dq
