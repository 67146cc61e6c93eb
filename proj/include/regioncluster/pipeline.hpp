#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regioncluster/clustering.hpp"
#include "regioncluster/config.hpp"
#include "regioncluster/corpus.hpp"
#include "regioncluster/evaluation.hpp"
#include "regioncluster/selection.hpp"

namespace regioncluster {

// Exit status contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInput = 2 };

// A pipeline stage failed. `input_error` separates bad input (exit 2) from
// internal failures (exit 1).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what, bool input_error)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), input_error_(input_error) {}

  const std::string& stage() const { return stage_; }
  bool input_error() const { return input_error_; }

 private:
  std::string stage_;
  bool input_error_;
};

struct PipelineResult {
  Corpus corpus;
  FilterResult filtered;
  SelectionReport selection;
  ProfileResult profiles;
  DistanceMatrix distances;
  Dendrogram tree;
  ClusterAssignment assignment;
  EvaluationReport evaluation;
  std::vector<std::string> warnings;
};

// ingest -> filter -> select -> profile -> distance -> upgma -> cut -> evaluate.
// Throws StageError naming the failing stage.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Same, starting from an in-memory corpus; `ground_truth` replaces the
// configured ground truth file.
PipelineResult run_pipeline(Corpus corpus, const PipelineConfig& cfg, const ClusterAssignment* ground_truth);

// Artifact file name -> content for a finished run.
std::map<std::string, std::string> render_artifacts(const PipelineResult& result, const PipelineConfig& cfg);

// Writes each file to a temporary name in `dir`, then renames all of them into
// place. On failure nothing is left under the final names written by this
// call.
void write_artifacts(const std::string& dir, const std::map<std::string, std::string>& files);

int cmd_validate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_run(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_summarize(const PipelineConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir, std::ostream& out, std::ostream& err);

}  // namespace regioncluster
