#pragma once

#include "surfkit/error.hpp"
#include "surfkit/wizard/knowledge_base.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace surfkit::wizard {

using Belief = std::map<std::string, Value>;

std::string_view to_string(GuardOp op);

/// Conjunction of atoms; an atom on an absent key is false. Order
/// comparisons apply to numbers and quantities only.
bool evaluate_guard(const std::vector<GuardAtom>& guard, const Belief& belief);

/// Target of the single outgoing edge of `current` whose guard holds.
/// Returns kDone at a terminal step (no outgoing edges) and for edges into
/// Done. Throws AmbiguousSuccessor, NoSuccessor, NotFound.
std::string next_task(const KnowledgeBase& kb, const std::string& workflow_id, const std::string& current,
                      const Belief& belief);

/// Guards may only name declared belief keys ("k type BeliefKey"); every
/// step is reachable from start and at least one edge leads to Done.
/// Throws ConsistencyError.
void validate_workflow(const KnowledgeBase& kb, const WorkflowDef& wf);

struct ModelCheckIssue {
  std::string step;
  Belief belief;
  Errc error;
};

/// Enumerates, for every step, the cross product of values each guarded
/// key can take (booleans both ways, numbers around every threshold,
/// symbols from the guards plus one unseen; Count keys stay
/// non-negative integers) and records every assignment
/// under which next_task would fail.
std::vector<ModelCheckIssue> model_check(const KnowledgeBase& kb, const std::string& workflow_id);

}  // namespace surfkit::wizard
