#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stratcorr/bootstrap.hpp"
#include "stratcorr/cluster.hpp"
#include "stratcorr/ingest.hpp"
#include "stratcorr/persistence.hpp"
#include "stratcorr/spectra.hpp"
#include "stratcorr/strategy.hpp"
#include "stratcorr/synth.hpp"

namespace stratcorr {

// Everything the pipeline needs; defaults follow the reference analysis
// (hour buckets 9-16, 1/3 activity filter, B = 1000, k = 2, complete
// linkage, tracks longer than 12 months for the minority test).
struct RunConfig {
    std::string input_path;
    std::string output_dir;
    std::vector<std::string> instruments;  // empty = all
    std::optional<Venue> venue;            // unset = both
    std::vector<Month> months;             // empty = all
    int first_hour = 9;
    int last_hour = 16;
    double activity_fraction = 1.0 / 3.0;
    double alpha = 0.05;
    int bootstrap_replicates = 1000;
    int bootstrap_ranks = 2;
    int block_length = 1;
    Linkage linkage = Linkage::complete;
    long minority_trials = 100000;
    int minority_min_months = 12;
    bool skip_singleton_minority = false;
    double pooled_lo = 0.0;
    double pooled_hi = 5.0;
    int pooled_bins = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

// Canonical key=value serialization (sorted keys, CLI option names). The
// output directory is deliberately excluded so two runs of the same
// analysis into different directories hash identically and emit
// byte-identical artifacts.
std::string serialize_config(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

struct MonthResult {
    Month month;
    StrategyBuild build;
    CorrelationResult corr;
    EigenReport eigen;
    BootstrapBand band;
    Dendrogram dendro;
    ClusterCut cut2;
};

struct GroupResult {
    std::string instrument;
    Venue venue = Venue::on_book;
    std::vector<MonthResult> months;
    PooledSpectrum pooled;
    std::vector<LinkMap> links;
    std::vector<Track> tracks;
    std::vector<PersistencePair> pairs;
    std::optional<RegressionResult> regression;
    std::vector<MinorityRow> minority;

    std::vector<MonthClustering> clusterings() const;
};

struct PipelineResult {
    ParseResult parse;
    std::vector<GroupResult> groups;
};

// Runs ingest -> strategy -> spectra -> bootstrap -> cluster -> persistence
// in memory, no artifact emission. Throws on stage errors.
PipelineResult run_pipeline(const RunConfig& config);

// Pipeline CLI entry point: runs the stages and emits every artifact class
// (strategy matrices, correlation matrices raw and leaf-ordered, eigen
// reports, pooled density, bootstrap bands, dendrograms, link maps, the
// regression table, minority table and cumulative strategy paths) plus a
// manifest recording completeness. Returns a process exit status; on error
// the artifacts produced so far stay on disk and the manifest marks what is
// missing.
int cmd_pipeline(const RunConfig& config);

// Single-stage entry points used by the CLI subcommands.
int cmd_synth(const SynthConfig& config, const std::filesystem::path& out_dir);
int cmd_discretize(const RunConfig& config);
int cmd_correlate(const std::filesystem::path& matrix_file, const std::filesystem::path& out_file);
int cmd_eigen(const std::filesystem::path& matrix_file, const std::filesystem::path& out_file);
int cmd_bootstrap(const std::filesystem::path& matrix_file, const std::filesystem::path& out_file,
                  const BootstrapOptions& opts);
int cmd_cluster(const std::filesystem::path& matrix_file, const std::filesystem::path& out_dir,
                Linkage linkage);
int cmd_persist(const RunConfig& config);
int cmd_minority(const RunConfig& config);
int cmd_score(const RunConfig& config, const std::filesystem::path& truth_file);

}  // namespace stratcorr
