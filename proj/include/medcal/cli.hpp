#pragma once

#include <medcal/medcore.hpp>
#include <medcal/oracle.hpp>
#include <medcal/subadder.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace medcal
{

/*! \brief Reproduction data attached to every report. */
struct run_manifest
{
  std::string command;
  std::vector<std::string> config_files;
  std::vector<std::uint64_t> seeds;
  std::string version;
  std::string host;
  std::string timestamp;
};

run_manifest make_manifest( const std::vector<std::string>& argv, std::vector<std::string> config_files,
                            std::vector<std::uint64_t> seeds );
nlohmann::json to_json( const run_manifest& manifest );

/*! \brief JSON view of a `med_cal` report.
 *
 * Exact quantities are strings (`"3/2"`, ED totals as decimal integers,
 * which can exceed 64 bits); floating renderings sit next to them.
 */
nlohmann::json report_json( const adder_config& config, const med_report& report );
nlohmann::json mc_json( const mc_stats& stats );

/*! \brief MED/ER/MSED computed through `med_cal`. */
exact_metrics engine_metrics( const adder_config& config );

using metrics_source = std::function<exact_metrics( const adder_config& )>;

struct check_outcome
{
  bool pass{false};
  exact_metrics engine;
  exact_metrics oracle;
};

/*! \brief Compares an engine against the exhaustive oracle, metric by metric. */
check_outcome check_config( const adder_config& config, const metrics_source& engine = engine_metrics );

/*! \brief Prints both metric triples; used on mismatch. */
void print_check( std::ostream& out, const check_outcome& outcome );

/*! \brief The i-th adder of a seeded random check sweep (m in [2, max_m], k in {1, 2}). */
adder_config sweep_config( std::uint64_t seed, std::uint64_t index, unsigned max_m );

struct bench_row
{
  unsigned n{0};
  unsigned m{0};
  unsigned k{0};
  std::uint64_t samples{0};
  unsigned trials{0};
  double exact_ms{0.0};
  double mc_ms{0.0};
  double speedup{0.0};
  double exact_med{0.0};
  double mc_err_min{0.0};
  double mc_err_q1{0.0};
  double mc_err_median{0.0};
  double mc_err_q3{0.0};
  double mc_err_max{0.0};

  friend bool operator==( const bench_row&, const bench_row& ) = default;
};

struct bench_options
{
  unsigned n{16};
  std::vector<unsigned> m_list;
  unsigned k{1};
  std::vector<std::uint64_t> samples_list;
  unsigned trials{5};
  unsigned repetitions{5};
  std::uint64_t seed{1};
};

/*! \brief Median wall time of `repetitions` calls after one warm-up call, in milliseconds. */
double median_time_ms( const std::function<void()>& fn, unsigned repetitions );

/*! \brief Runtime/accuracy sweep of `med_cal` against Monte Carlo sampling.
 *
 * For every (m, S) the same `trials` random adders (seeded from `seed`, m
 * and the trial index) are timed with both methods; runtimes are the mean
 * of the per-adder medians and `speedup = mc_ms / exact_ms`.
 */
std::vector<bench_row> run_bench( const bench_options& options );

inline constexpr const char* bench_header =
    "n,m,k,S,trials,exact_ms,mc_ms,speedup,exact_med,mc_err_min,mc_err_q1,mc_err_median,mc_err_q3,mc_err_max";

void write_bench_csv( std::ostream& out, const std::vector<bench_row>& rows );
std::vector<bench_row> parse_bench_csv( std::istream& in );

/*! \brief Writes `slot_<i>.tt` for each slot plus `manifest.json`; returns the table paths. */
std::vector<std::filesystem::path> generate_tables( unsigned k, unsigned slots, std::uint64_t seed,
                                                    const std::filesystem::path& dir );

/*! \brief Parses counts such as `4096` or `2^12`. */
std::uint64_t parse_count( const std::string& text );

/*! \brief Entry point of the `medcal` tool.  Exit codes: 0 ok, 1 check mismatch, 2 usage/parse error. */
int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

} // namespace medcal
