// lexcluster: topic modelling and citation-community pipeline.
//
// Exit codes: 0 success, 1 validation error (bad config, bad input, missing
// upstream artifact, bad usage), 2 any other failure.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexcluster/pipeline.hpp"

namespace {

struct Step {
  const char* name;
  const char* help;
};

constexpr Step kSteps[] = {
    {"ingest", "load the corpus and annotations, write the census"},
    {"preprocess", "normalize English texts into a vocabulary and bags of words"},
    {"lda-train", "train the LDA model with lda.topics topics"},
    {"lda-sweep", "UMass coherence over lda.sweep_min..lda.sweep_max"},
    {"embed", "t-SNE projection of the document-topic vectors"},
    {"graph-build", "citation graph, component census and giant component"},
    {"weight", "weight giant-component edges by topic-vector cosine"},
    {"communities", "Louvain communities for each resolution in louvain.resolutions"},
    {"evaluate", "cross-tabulate clusters and communities against the label set"},
    {"report", "bundle census, coherence, topics, partitions and evaluation"},
    {"all", "run every step in order"},
    {"verify", "re-hash every artifact listed in the manifests"},
};

int verify(const std::filesystem::path& root) {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  if (std::filesystem::exists(root)) {
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
      if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.json")) {
        dirs.push_back(entry.path());
      }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
      ++checked;
      for (auto& p : lexcluster::verify_manifest(d)) problems.push_back(std::move(p));
    }
  }
  if (checked == 0) throw lexcluster::ValidationError("no manifests under " + root.string());
  for (const auto& p : problems) std::cerr << p << '\n';
  std::cout << checked << " manifest(s) checked, " << problems.size() << " problem(s)\n";
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modelling and citation-community analysis of court rulings"};
  app.set_version_flag("--version", std::string(lexcluster::kVersion));
  std::string config_path;
  std::vector<std::string> overrides;
  bool quiet = false;
  bool weighted = false;
  app.add_option("-c,--config", config_path, "run configuration (TOML)")->required();
  app.add_option("--set", overrides, "override a config value, e.g. --set lda.topics=20");
  app.add_flag("-q,--quiet", quiet, "only print warnings and errors");
  app.require_subcommand(1, 1);
  for (const auto& step : kSteps) {
    auto* sub = app.add_subcommand(step.name, step.help);
    if (std::string(step.name) == "communities") {
      sub->add_flag("--weighted", weighted, "use the topic-weighted giant component");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (quiet) {
    lexcluster::set_log_sink([](std::string_view level, std::string_view message) {
      if (level != "info") std::cerr << "[" << level << "] " << message << '\n';
    });
  }

  try {
    const auto cfg = lexcluster::load_run_config(config_path, overrides);
    lexcluster::Pipeline pipeline(cfg);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "ingest") pipeline.ingest();
    else if (name == "preprocess") pipeline.preprocess();
    else if (name == "lda-train") pipeline.lda_train();
    else if (name == "lda-sweep") pipeline.lda_sweep();
    else if (name == "embed") pipeline.embed();
    else if (name == "graph-build") pipeline.graph_build();
    else if (name == "weight") pipeline.weight();
    else if (name == "communities") pipeline.communities(weighted);
    else if (name == "evaluate") pipeline.evaluate();
    else if (name == "report") pipeline.report();
    else if (name == "all") pipeline.all();
    else if (name == "verify") return verify(cfg.output_dir());
    return 0;
  } catch (const lexcluster::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
