#pragma once

#include <string_view>

#include "dyad/common.hpp"
#include "dyad/geometry.hpp"

namespace dyad {

enum class Commitment { NoGoal, Soft, Hard };

// One agent's private goal: nothing, a soft preference it may abandon
// under opposition, or a hard commitment it never drops.
struct AgentGoal {
  Commitment commitment = Commitment::NoGoal;
  int goal = -1;  // layout index, -1 when commitment == NoGoal

  static AgentGoal none() { return {}; }
  static AgentGoal soft(int i) { return {Commitment::Soft, i}; }
  static AgentGoal hard(int i) { return {Commitment::Hard, i}; }

  bool has_goal() const { return commitment != Commitment::NoGoal; }
};

struct GoalAssignment {
  AgentGoal agent1;
  AgentGoal agent2;

  void validate(const GoalLayout& layout) const {
    for (const AgentGoal& a : {agent1, agent2}) {
      if (a.has_goal() && !layout.valid_index(a.goal)) {
        throw DataError("goal assignment: goal index out of layout range");
      }
      if (!a.has_goal() && a.goal != -1) {
        throw DataError("goal assignment: NoGoal must carry index -1");
      }
    }
  }
};

enum class InteractionType {
  KCG,
  NoGoalVsNoGoal,
  NoGoalVsSoft,
  NoGoalVsHard,
  NonConflictingHH,
  NonConflictingHS,
  NonConflictingSS,
  ConflictingHS,
  ConflictingSS,
  ConflictingHH,  // representable, flagged unresolvable
};

InteractionType interaction_type(const GoalAssignment& assignment, bool kcg);

// ConflictingHH has no concession mechanism, so no consensus can emerge.
inline bool resolvable(InteractionType t) {
  return t != InteractionType::ConflictingHH;
}

std::string_view interaction_token(InteractionType t);
InteractionType interaction_from_token(std::string_view token);

std::string_view commitment_token(Commitment c);
Commitment commitment_from_token(std::string_view token);

}  // namespace dyad
