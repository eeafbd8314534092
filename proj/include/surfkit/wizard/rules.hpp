#pragma once

#include "surfkit/wizard/knowledge_base.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace surfkit::wizard {

using Tuple = std::vector<Value>;

/// Rules every knowledge base carries, even an empty one:
///   has_tool(?task, ?tool)           via requires / capableOf
///   compatible_material(?tool, ?m)   via suitableFor
///   default_param(?task, ?m, ?k, ?v) via parameter sets
const std::vector<Rule>& builtin_rules();
std::string_view builtin_rules_text();

/// Parses "name: head(args) :- atom(args), ... ." (no leading @rule).
Rule parse_rule(std::string_view text);

/// Tuples of `predicate` that match `args` after naive forward chaining of
/// the built-in and KB rules to a fixpoint. Explicit binary triples with
/// the same predicate are included. Order is first-derivation order.
///
/// Throws UnknownRule when no rule concludes `predicate`.
std::vector<Tuple> derive(const KnowledgeBase& kb, const std::string& predicate, const std::vector<Term>& args);

}  // namespace surfkit::wizard
