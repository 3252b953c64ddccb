#include <medcal/cli.hpp>

#include <medcal/errors.hpp>

#include <chrono>
#include <ctime>
#include <ostream>
#include <sys/utsname.h>

#ifndef MEDCAL_VERSION
#define MEDCAL_VERSION "0.0.0"
#endif

namespace medcal
{

namespace
{

std::string host_description()
{
  utsname info{};
  if ( uname( &info ) != 0 )
  {
    return "unknown";
  }
  return std::string( info.sysname ) + " " + info.release + " " + info.machine + " (" + info.nodename + ")";
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t( std::chrono::system_clock::now() );
  std::tm tm{};
  gmtime_r( &now, &tm );
  char buffer[32];
  std::strftime( buffer, sizeof( buffer ), "%Y-%m-%dT%H:%M:%SZ", &tm );
  return buffer;
}

std::string metrics_line( const exact_metrics& metrics )
{
  return "med=" + metrics.med.str() + " er=" + metrics.er.str() + " msed=" + metrics.msed.str();
}

} // namespace

run_manifest make_manifest( const std::vector<std::string>& argv, std::vector<std::string> config_files,
                            std::vector<std::uint64_t> seeds )
{
  run_manifest manifest;
  for ( const auto& arg : argv )
  {
    manifest.command += ( manifest.command.empty() ? "" : " " ) + arg;
  }
  manifest.config_files = std::move( config_files );
  manifest.seeds = std::move( seeds );
  manifest.version = MEDCAL_VERSION;
  manifest.host = host_description();
  manifest.timestamp = utc_timestamp();
  return manifest;
}

nlohmann::json to_json( const run_manifest& manifest )
{
  return {{"command", manifest.command}, {"config_files", manifest.config_files}, {"seeds", manifest.seeds},
          {"version", manifest.version},  {"host", manifest.host},                 {"timestamp", manifest.timestamp}};
}

nlohmann::json report_json( const adder_config& config, const med_report& report )
{
  nlohmann::json ed_tot;
  for ( unsigned i = 0; i < 4u; ++i )
  {
    const auto pair = carry_pair::from_index( i );
    ed_tot[std::to_string( pair.exact ) + std::to_string( pair.approx )] = report.ed_tot[i].str();
  }
  return {{"med", report.med.str()},
          {"med_float", to_double( report.med )},
          {"er", report.er.str()},
          {"er_float", to_double( report.er )},
          {"msed", report.msed.str()},
          {"msed_float", to_double( report.msed )},
          {"ed_tot", ed_tot},
          {"iterations", report.iteration_count},
          {"iteration_bound", report.iteration_bound},
          {"row_copies", report.row_copies},
          {"trace_length", report.iteration_count},
          {"wall_ms", std::chrono::duration<double, std::milli>( report.wall_time ).count()},
          {"config",
           {{"n", config.n()},
            {"m", config.m()},
            {"k", config.k()},
            {"signed", config.mode() == sign_mode::signed_mode},
            {"initial_carry", config.initial_carry()}}}};
}

nlohmann::json mc_json( const mc_stats& stats )
{
  nlohmann::json j = {{"samples", stats.sample_count},   {"trials", stats.trials},         {"exhaustive", stats.exhaustive},
                      {"estimate", stats.estimate},       {"err_min", stats.err_min},       {"err_q1", stats.err_q1},
                      {"err_median", stats.err_median},   {"err_q3", stats.err_q3},         {"err_max", stats.err_max}};
  if ( stats.abs_error )
  {
    j["abs_error"] = *stats.abs_error;
  }
  return j;
}

exact_metrics engine_metrics( const adder_config& config )
{
  const auto result = med_cal( config );
  return {result.report.med, result.report.er, result.report.msed};
}

check_outcome check_config( const adder_config& config, const metrics_source& engine )
{
  check_outcome outcome;
  outcome.engine = engine( config );
  outcome.oracle = exhaustive_metrics( config );
  outcome.pass = outcome.engine == outcome.oracle;
  return outcome;
}

void print_check( std::ostream& out, const check_outcome& outcome )
{
  out << ( outcome.pass ? "PASS" : "MISMATCH" ) << '\n';
  out << "  engine: " << metrics_line( outcome.engine ) << '\n';
  out << "  oracle: " << metrics_line( outcome.oracle ) << '\n';
}

adder_config sweep_config( std::uint64_t seed, std::uint64_t index, unsigned max_m )
{
  if ( max_m < 2u )
  {
    throw config_error( "sweep needs max_m >= 2" );
  }
  const unsigned span = max_m - 1u;
  const auto m = static_cast<unsigned>( 2u + index % span );
  const bool wide = ( index / span ) % 2u == 1u && m % 2u == 0u;
  return random_config( m, wide ? 2u : 1u, derive_seed( seed, index ) );
}

} // namespace medcal
