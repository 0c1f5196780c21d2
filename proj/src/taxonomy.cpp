#include "dyad/taxonomy.hpp"

#include <string>

namespace dyad {

InteractionType interaction_type(const GoalAssignment& assignment, bool kcg) {
  if (kcg) return InteractionType::KCG;
  const AgentGoal& a = assignment.agent1;
  const AgentGoal& b = assignment.agent2;

  if (!a.has_goal() && !b.has_goal()) return InteractionType::NoGoalVsNoGoal;
  if (!a.has_goal() || !b.has_goal()) {
    const AgentGoal& holder = a.has_goal() ? a : b;
    return holder.commitment == Commitment::Hard
               ? InteractionType::NoGoalVsHard
               : InteractionType::NoGoalVsSoft;
  }

  const bool same_goal = a.goal == b.goal;
  const int hard_count = (a.commitment == Commitment::Hard ? 1 : 0) +
                         (b.commitment == Commitment::Hard ? 1 : 0);
  if (same_goal) {
    if (hard_count == 2) return InteractionType::NonConflictingHH;
    if (hard_count == 1) return InteractionType::NonConflictingHS;
    return InteractionType::NonConflictingSS;
  }
  if (hard_count == 2) return InteractionType::ConflictingHH;
  if (hard_count == 1) return InteractionType::ConflictingHS;
  return InteractionType::ConflictingSS;
}

std::string_view interaction_token(InteractionType t) {
  switch (t) {
    case InteractionType::KCG: return "kcg";
    case InteractionType::NoGoalVsNoGoal: return "no_goal_vs_no_goal";
    case InteractionType::NoGoalVsSoft: return "no_goal_vs_soft";
    case InteractionType::NoGoalVsHard: return "no_goal_vs_hard";
    case InteractionType::NonConflictingHH: return "non_conflicting_hh";
    case InteractionType::NonConflictingHS: return "non_conflicting_hs";
    case InteractionType::NonConflictingSS: return "non_conflicting_ss";
    case InteractionType::ConflictingHS: return "conflicting_hs";
    case InteractionType::ConflictingSS: return "conflicting_ss";
    case InteractionType::ConflictingHH: return "conflicting_hh";
  }
  throw std::logic_error("interaction_token: bad enum value");
}

InteractionType interaction_from_token(std::string_view token) {
  for (InteractionType t :
       {InteractionType::KCG, InteractionType::NoGoalVsNoGoal,
        InteractionType::NoGoalVsSoft, InteractionType::NoGoalVsHard,
        InteractionType::NonConflictingHH, InteractionType::NonConflictingHS,
        InteractionType::NonConflictingSS, InteractionType::ConflictingHS,
        InteractionType::ConflictingSS, InteractionType::ConflictingHH}) {
    if (interaction_token(t) == token) return t;
  }
  throw DataError("unknown interaction type: " + std::string(token));
}

std::string_view commitment_token(Commitment c) {
  switch (c) {
    case Commitment::NoGoal: return "none";
    case Commitment::Soft: return "soft";
    case Commitment::Hard: return "hard";
  }
  throw std::logic_error("commitment_token: bad enum value");
}

Commitment commitment_from_token(std::string_view token) {
  if (token == "none") return Commitment::NoGoal;
  if (token == "soft") return Commitment::Soft;
  if (token == "hard") return Commitment::Hard;
  throw DataError("unknown commitment: " + std::string(token));
}

}  // namespace dyad
