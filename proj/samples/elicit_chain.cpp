// Walks a two-argument chain a -> b through the elicitation loop: check,
// correct, refine, then sample initial weights.

#include <cstdio>

#include "argelicit/argelicit.hpp"

using namespace argelicit;

namespace {

void show(const char* label, const Caf& caf, Semantics sem) {
  std::printf("%-10s", label);
  for (std::size_t i = 0; i < caf.size(); ++i) {
    std::printf("  %s in [%.4f, %.4f]", caf.graph().id(i).c_str(), caf.interval(i).lo, caf.interval(i).hi);
  }
  std::printf("  -> %s\n", std::string(to_string(rationality_kind(caf, sem))).c_str());
}

}  // namespace

int main() {
  const Semantics sem = Semantics::kHbs;
  Caf caf(AttackGraph({"a", "b"}, {{"a", "b"}}), {{0.8, 1.0}, {0.6, 0.7}});
  show("elicited", caf, sem);

  const CorrectionResult fix = correct_strategy2(caf, sem, CostMap{1.0, 1.0}, 1e-6);
  std::printf("correction moves {");
  for (const auto& id : *fix.subset) std::printf(" %s", id.c_str());
  std::printf(" } at cost %.6f\n", fix.total_cost);
  caf = fix.corrected;
  show("corrected", caf, sem);

  caf = refine(caf, sem, 1e-6).refined;
  show("refined", caf, sem);

  const SampleBatch batch = sample_weights(caf, sem, 3, 100, 1);
  for (const auto& s : batch.entries) {
    std::printf("  w = (%.4f, %.4f)  deg = (%.4f, %.4f)\n", s.weights[0], s.weights[1], s.degrees[0], s.degrees[1]);
  }
  return 0;
}
