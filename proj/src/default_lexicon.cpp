#include "hprr/aspects.hpp"

namespace hprr::aspects {

const Lexicon& Lexicon::builtin() {
  static const Lexicon lexicon = Lexicon::from_json(nlohmann::json::parse(R"json({
  "Cr": ["lack of", "lacks", "lacking", "not clear", "unclear", "fails to", "fail to", "failed to",
         "weakness", "weaknesses", "weak", "limited", "limitation", "limitations", "insufficient",
         "missing", "problem", "problematic", "concern", "concerns", "confusing", "not convincing",
         "unconvincing", "questionable", "flaw", "flawed", "incorrect", "wrong", "poorly",
         "not sufficient", "not enough", "overclaim", "unfortunately", "drawback", "inconsistent",
         "does not", "do not", "is not", "are not", "doesn't", "isn't", "hard to"],
  "Ex":  ["for example", "for instance", "e g", "such as", "in particular", "specifically",
          "line", "lines", "page", "table", "eq", "equation", "fig", "figure", "section",
          "appendix", "algorithm 1", "theorem", "lemma"],
  "ImRe": ["important", "importance", "significant", "significance", "relevant", "relevance",
           "impact", "impactful", "novel", "novelty", "contribution", "contributions", "valuable",
           "timely", "useful", "practical", "original", "originality", "state of the art"],
  "MaMe": ["method", "methods", "methodology", "approach", "experiment", "experiments",
           "experimental", "dataset", "datasets", "data", "model", "models", "algorithm",
           "baseline", "baselines", "training", "evaluation", "setup", "implementation",
           "architecture", "hyperparameter", "hyperparameters", "procedure", "sample", "samples",
           "protocol", "benchmark", "benchmarks", "loss", "optimization"],
  "Pr":  ["well written", "clearly written", "well organized", "well motivated", "clear", "clearly",
          "good", "great", "excellent", "nice", "strong", "impressive", "interesting", "thorough",
          "solid", "elegant", "i like", "i liked", "appreciate", "enjoyed", "compelling",
          "convincing", "strength", "strengths", "commend"],
  "PrRe": ["writing", "written", "presentation", "presented", "typo", "typos", "grammar",
           "grammatical", "notation", "readability", "readable", "clarity", "organization",
           "organized", "caption", "captions", "hard to follow", "difficult to follow", "explain",
           "explanation", "explained", "define", "defined", "definition", "description",
           "described", "reader", "readers", "paragraph", "wording", "figures", "plots", "legend"],
  "ReDi": ["result", "results", "performance", "accuracy", "outperforms", "outperform",
           "improvement", "improvements", "improves", "discussion", "discuss", "discussed",
           "analysis", "findings", "conclusion", "conclusions", "ablation", "empirical",
           "empirically", "show that", "shows that", "demonstrate", "demonstrates", "observed",
           "gains", "comparison", "compared"],
  "SuSo": ["should", "would benefit from", "could", "suggest", "suggests", "suggestion",
           "suggestions", "recommend", "recommended", "consider", "it would be", "would be good",
           "would be nice", "would help", "please", "i encourage", "needs to", "need to",
           "it is worth", "might want", "may want", "ought to", "future work", "instead"]
})json"));
  return lexicon;
}

}  // namespace hprr::aspects
