#include <medcal/cli.hpp>

#include <medcal/errors.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>

namespace medcal
{

namespace
{

/* adder selection flags shared by med, check and mc */
struct config_options
{
  unsigned n{0};
  unsigned m{0};
  unsigned k{0};
  std::string adder;
  std::string table;
  std::vector<std::string> table_slots;
  bool is_signed{false};
  unsigned initial_carry{0};

  void add_to( CLI::App& sub )
  {
    sub.add_option( "--m", m, "number of approximated LSBs" );
    sub.add_option( "--k", k, "sub-adder width" );
    sub.add_option( "--n", n, "total adder width (defaults to m)" );
    sub.add_option( "--adder", adder, "built-in adder: exact, worked-example, random (uses --seed)" )
        ->check( CLI::IsMember( {"exact", "worked-example", "random"} ) );
    sub.add_option( "--table", table, ".tt file used for every slot" );
    sub.add_option( "--table-slot", table_slots, "I:FILE, .tt file for slot I (repeatable)" );
    sub.add_flag( "--signed", is_signed, "signed carry-out interpretation (experimental)" );
    sub.add_option( "--initial-carry", initial_carry, "carry into slot 0" )->check( CLI::Range( 0u, 1u ) );
  }

  bool given() const { return !adder.empty() || !table.empty() || !table_slots.empty() || m != 0u; }

  adder_config build( std::uint64_t seed, std::vector<std::string>& files ) const
  {
    std::vector<std::optional<subadder_table>> slots;
    unsigned width_m = m;
    unsigned width_k = k;

    if ( adder == "worked-example" )
    {
      if ( ( m != 0u && m != 2u ) || ( k != 0u && k != 1u ) )
      {
        throw config_error( "worked-example is fixed at m=2, k=1" );
      }
      width_m = 2u;
      width_k = 1u;
      const auto example = worked_example_config();
      slots.assign( example.slots().begin(), example.slots().end() );
    }
    else
    {
      if ( m == 0u || k == 0u )
      {
        throw config_error( "--m and --k are required" );
      }
      validate_geometry( n == 0u ? m : n, m, k );
      slots.resize( m / k );
      if ( adder == "exact" )
      {
        std::fill( slots.begin(), slots.end(), exact_table( k ) );
      }
      else if ( adder == "random" )
      {
        const auto random = random_config( m, k, seed );
        slots.assign( random.slots().begin(), random.slots().end() );
      }
      if ( !table.empty() )
      {
        std::fill( slots.begin(), slots.end(), load_table( table ) );
        files.push_back( table );
      }
    }

    for ( const auto& spec : table_slots )
    {
      const auto colon = spec.find( ':' );
      unsigned index = 0;
      try
      {
        if ( colon == std::string::npos )
        {
          throw std::invalid_argument( spec );
        }
        index = static_cast<unsigned>( std::stoul( spec.substr( 0, colon ) ) );
      }
      catch ( const std::exception& )
      {
        throw config_error( "--table-slot expects I:FILE, got '" + spec + "'" );
      }
      if ( index >= slots.size() )
      {
        throw config_error( "--table-slot index " + std::to_string( index ) + " out of range, adder has " +
                            std::to_string( slots.size() ) + " slots" );
      }
      const auto path = spec.substr( colon + 1 );
      slots[index] = load_table( path );
      files.push_back( path );
    }

    std::vector<subadder_table> tables;
    for ( std::size_t i = 0; i < slots.size(); ++i )
    {
      if ( !slots[i] )
      {
        throw config_error( "slot " + std::to_string( i ) + " has no table; use --adder, --table or --table-slot" );
      }
      tables.push_back( *slots[i] );
    }
    return adder_config( n == 0u ? width_m : n, width_m, width_k, std::move( tables ),
                         is_signed ? sign_mode::signed_mode : sign_mode::unsigned_mode, initial_carry );
  }
};

void print_metrics_json( std::ostream& out, nlohmann::json j ) { out << j.dump( 2 ) << '\n'; }

} // namespace

int run_cli( const std::vector<std::string>& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{"Exact error metrics for approximate lower-part adders"};
  app.name( "medcal" );
  app.require_subcommand( 1 );

  std::uint64_t seed = 1;
  bool json = false;
  bool quiet = false;
  app.add_option( "--seed", seed, "seed for random adders and sampling" );
  app.add_flag( "--json", json, "machine-readable output" );
  app.add_flag( "--quiet", quiet, "suppress informational messages" );

  config_options med_opts;
  std::string trace_path;
  auto* med = app.add_subcommand( "med", "exact MED, ER and MSED by histogram propagation" );
  med->fallthrough();
  med_opts.add_to( *med );
  med->add_option( "--trace", trace_path, "write the per-iteration trace as CSV" );

  config_options check_opts;
  unsigned max_m = 0;
  unsigned random_count = 0;
  auto* check = app.add_subcommand( "check", "cross-check the engine against exhaustive enumeration" );
  check->fallthrough();
  check_opts.add_to( *check );
  check->add_option( "--max-m", max_m, "largest m to enumerate (default 14, or 10 with --random)" );
  check->add_option( "--random", random_count, "check this many seeded random adders instead" );

  config_options mc_opts;
  std::string mc_samples;
  unsigned mc_trials = 1;
  auto* mc = app.add_subcommand( "mc", "Monte Carlo MED estimate" );
  mc->fallthrough();
  mc_opts.add_to( *mc );
  mc->add_option( "--samples", mc_samples, "sample count, e.g. 4096 or 2^12" )->required();
  mc->add_option( "--trials", mc_trials, "1 for a single estimate, >= 5 for an error distribution" );

  bench_options bench_opts;
  std::vector<std::string> bench_samples;
  std::string bench_out;
  auto* bench = app.add_subcommand( "bench", "runtime and accuracy sweep against Monte Carlo" );
  bench->fallthrough();
  bench->add_option( "--m-list", bench_opts.m_list, "comma separated m values" )->required()->delimiter( ',' );
  bench->add_option( "--k", bench_opts.k, "sub-adder width" );
  bench->add_option( "--n", bench_opts.n, "total adder width" );
  bench->add_option( "--samples-list", bench_samples, "comma separated sample counts" )->required()->delimiter( ',' );
  bench->add_option( "--trials", bench_opts.trials, "random adders per row" );
  bench->add_option( "--reps", bench_opts.repetitions, "timed repetitions per measurement" );
  bench->add_option( "--out", bench_out, "CSV output file (stdout if omitted)" );

  unsigned gen_k = 0;
  unsigned gen_slots = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand( "gen", "write random sub-adder tables" );
  gen->fallthrough();
  gen->add_option( "--k", gen_k, "sub-adder width" )->required();
  gen->add_option( "--slots", gen_slots, "number of tables" )->required();
  gen->add_option( "--out", gen_out, "output directory" )->required();

  std::vector<const char*> argv;
  argv.reserve( args.size() + 1 );
  argv.push_back( args.empty() ? "medcal" : args.front().c_str() );
  for ( std::size_t i = 1; i < args.size(); ++i )
  {
    argv.push_back( args[i].c_str() );
  }

  try
  {
    app.parse( static_cast<int>( argv.size() ), argv.data() );
  }
  catch ( const CLI::ParseError& e )
  {
    const int code = app.exit( e, out, err );
    return code == 0 ? 0 : 2;
  }

  try
  {
    std::vector<std::string> files;
    if ( med->parsed() )
    {
      const auto config = med_opts.build( seed, files );
      std::optional<std::ofstream> trace_file;
      trace_observer observer;
      if ( !trace_path.empty() )
      {
        trace_file.emplace( trace_path, std::ios::binary );
        if ( !*trace_file )
        {
          throw std::runtime_error( "cannot write trace file '" + trace_path + "'" );
        }
        observer = csv_trace_writer( *trace_file, config.k() );
      }
      const auto result = med_cal( config, observer );
      auto j = report_json( config, result.report );
      j["manifest"] = to_json( make_manifest( args, files, {seed} ) );
      print_metrics_json( out, j );
      if ( trace_file && !quiet )
      {
        err << "trace written to " << trace_path << '\n';
      }
      return 0;
    }

    if ( check->parsed() )
    {
      if ( random_count > 0u )
      {
        const unsigned limit = max_m == 0u ? 10u : max_m;
        unsigned failures = 0;
        for ( unsigned i = 0; i < random_count; ++i )
        {
          const auto config = sweep_config( seed, i, limit );
          const auto outcome = check_config( config );
          if ( !outcome.pass )
          {
            ++failures;
            err << "config " << i << " (m=" << config.m() << ", k=" << config.k() << ") ";
            print_check( err, outcome );
          }
        }
        if ( json )
        {
          print_metrics_json( out, {{"checked", random_count}, {"mismatches", failures}, {"pass", failures == 0u}} );
        }
        else if ( !quiet || failures != 0u )
        {
          out << ( failures == 0u ? "PASS" : "FAIL" ) << ": " << random_count << " random adders, " << failures
              << " mismatches\n";
        }
        return failures == 0u ? 0 : 1;
      }

      if ( !check_opts.given() )
      {
        throw config_error( "check needs an adder (--adder/--table/--table-slot) or --random N" );
      }
      const auto config = check_opts.build( seed, files );
      const unsigned limit = max_m == 0u ? max_exhaustive_bits : std::min( max_m, max_exhaustive_bits );
      if ( config.m() > limit )
      {
        throw config_error( "m=" + std::to_string( config.m() ) + " exceeds --max-m " + std::to_string( limit ) );
      }
      const auto outcome = check_config( config );
      if ( json )
      {
        print_metrics_json( out, {{"pass", outcome.pass},
                                  {"engine", {{"med", outcome.engine.med.str()}, {"er", outcome.engine.er.str()}, {"msed", outcome.engine.msed.str()}}},
                                  {"oracle", {{"med", outcome.oracle.med.str()}, {"er", outcome.oracle.er.str()}, {"msed", outcome.oracle.msed.str()}}}} );
      }
      else if ( !outcome.pass || !quiet )
      {
        print_check( outcome.pass ? out : err, outcome );
      }
      return outcome.pass ? 0 : 1;
    }

    if ( mc->parsed() )
    {
      const auto config = mc_opts.build( seed, files );
      const auto samples = parse_count( mc_samples );
      mc_stats stats;
      if ( mc_trials == 1u )
      {
        stats = mc_estimate( config, samples, seed, to_double( med_cal( config ).report.med ) );
      }
      else
      {
        stats = mc_error_distribution( config, samples, mc_trials, seed );
      }
      if ( json )
      {
        auto j = mc_json( stats );
        j["manifest"] = to_json( make_manifest( args, files, {seed} ) );
        print_metrics_json( out, j );
      }
      else
      {
        out << "estimate " << stats.estimate << ( stats.exhaustive ? " (exhaustive)" : "" ) << '\n';
        out << "abs error " << stats.abs_error.value_or( 0.0 ) << '\n';
        if ( stats.trials > 1u )
        {
          out << "error min/q1/median/q3/max " << stats.err_min << ' ' << stats.err_q1 << ' ' << stats.err_median
              << ' ' << stats.err_q3 << ' ' << stats.err_max << '\n';
        }
      }
      return 0;
    }

    if ( bench->parsed() )
    {
      for ( const auto& s : bench_samples )
      {
        bench_opts.samples_list.push_back( parse_count( s ) );
      }
      bench_opts.seed = seed;
      const auto rows = run_bench( bench_opts );
      if ( bench_out.empty() )
      {
        write_bench_csv( out, rows );
      }
      else
      {
        std::ofstream csv( bench_out, std::ios::binary );
        if ( !csv )
        {
          throw std::runtime_error( "cannot write '" + bench_out + "'" );
        }
        write_bench_csv( csv, rows );
        std::ofstream manifest( bench_out + ".manifest.json", std::ios::binary );
        manifest << to_json( make_manifest( args, {}, {seed} ) ).dump( 2 ) << '\n';
        if ( !quiet )
        {
          err << "wrote " << rows.size() << " rows to " << bench_out << '\n';
        }
      }
      return 0;
    }

    if ( gen->parsed() )
    {
      const auto paths = generate_tables( gen_k, gen_slots, seed, gen_out );
      if ( !quiet )
      {
        for ( const auto& p : paths )
        {
          out << p.string() << '\n';
        }
      }
      return 0;
    }
  }
  catch ( const config_error& e )
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  catch ( const std::exception& e )
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

} // namespace medcal
