#include <medcal/cli.hpp>

#include <medcal/errors.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace medcal
{

namespace
{

std::string format_double( double value )
{
  char buffer[64];
  const auto [ptr, ec] = std::to_chars( buffer, buffer + sizeof( buffer ), value );
  return std::string( buffer, ptr );
}

template<typename T>
T parse_field( std::string_view text, std::size_t line )
{
  T value{};
  const auto [ptr, ec] = std::from_chars( text.data(), text.data() + text.size(), value );
  if ( ec != std::errc{} || ptr != text.data() + text.size() )
  {
    throw parse_error( line, "bad CSV field '" + std::string( text ) + "'" );
  }
  return value;
}

} // namespace

double median_time_ms( const std::function<void()>& fn, unsigned repetitions )
{
  using clock = std::chrono::steady_clock;
  fn();
  std::vector<double> times;
  times.reserve( repetitions );
  for ( unsigned r = 0; r < std::max( repetitions, 1u ); ++r )
  {
    const auto start = clock::now();
    fn();
    times.push_back( std::chrono::duration<double, std::milli>( clock::now() - start ).count() );
  }
  // a zero reading means the clock resolution was not reached
  return std::max( summarize( std::move( times ) ).median, 1e-6 );
}

std::vector<bench_row> run_bench( const bench_options& options )
{
  if ( options.m_list.empty() || options.samples_list.empty() )
  {
    throw config_error( "bench needs nonempty m and sample lists" );
  }
  if ( options.trials == 0u )
  {
    throw config_error( "bench needs at least one trial" );
  }

  std::vector<bench_row> rows;
  for ( const auto m : options.m_list )
  {
    validate_geometry( options.n, m, options.k );
    std::vector<adder_config> adders;
    std::vector<double> exact_meds;
    for ( unsigned t = 0; t < options.trials; ++t )
    {
      adders.push_back( random_config( m, options.k, derive_seed( derive_seed( options.seed, m ), t ), options.n ) );
      exact_meds.push_back( to_double( med_cal( adders.back() ).report.med ) );
    }

    for ( const auto samples : options.samples_list )
    {
      bench_row row;
      row.n = options.n;
      row.m = m;
      row.k = options.k;
      row.samples = samples;
      row.trials = options.trials;

      std::vector<double> errors;
      double exact_ms = 0.0;
      double mc_ms = 0.0;
      double med_sum = 0.0;
      for ( unsigned t = 0; t < options.trials; ++t )
      {
        const auto& adder = adders[t];
        const std::uint64_t mc_seed = options.seed + t;
        exact_ms += median_time_ms( [&adder] { (void)med_cal( adder ); }, options.repetitions );
        mc_ms += median_time_ms( [&adder, samples, mc_seed] { (void)mc_estimate( adder, samples, mc_seed ); },
                                 options.repetitions );
        errors.push_back( *mc_estimate( adder, samples, mc_seed, exact_meds[t] ).abs_error );
        med_sum += exact_meds[t];
      }
      row.exact_ms = exact_ms / options.trials;
      row.mc_ms = mc_ms / options.trials;
      row.speedup = row.mc_ms / row.exact_ms;
      row.exact_med = med_sum / options.trials;
      const auto summary = summarize( std::move( errors ) );
      row.mc_err_min = summary.min;
      row.mc_err_q1 = summary.q1;
      row.mc_err_median = summary.median;
      row.mc_err_q3 = summary.q3;
      row.mc_err_max = summary.max;
      rows.push_back( row );
    }
  }
  return rows;
}

void write_bench_csv( std::ostream& out, const std::vector<bench_row>& rows )
{
  out << bench_header << '\n';
  for ( const auto& r : rows )
  {
    out << r.n << ',' << r.m << ',' << r.k << ',' << r.samples << ',' << r.trials << ',' << format_double( r.exact_ms )
        << ',' << format_double( r.mc_ms ) << ',' << format_double( r.speedup ) << ',' << format_double( r.exact_med )
        << ',' << format_double( r.mc_err_min ) << ',' << format_double( r.mc_err_q1 ) << ','
        << format_double( r.mc_err_median ) << ',' << format_double( r.mc_err_q3 ) << ','
        << format_double( r.mc_err_max ) << '\n';
  }
}

std::vector<bench_row> parse_bench_csv( std::istream& in )
{
  std::string line;
  std::size_t line_no = 1;
  if ( !std::getline( in, line ) || line != bench_header )
  {
    throw parse_error( line_no, "expected bench CSV header" );
  }
  std::vector<bench_row> rows;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    if ( line.empty() )
    {
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view rest( line );
    while ( true )
    {
      const auto comma = rest.find( ',' );
      f.push_back( rest.substr( 0, comma ) );
      if ( comma == std::string_view::npos )
      {
        break;
      }
      rest.remove_prefix( comma + 1 );
    }
    if ( f.size() != 14u )
    {
      throw parse_error( line_no, "expected 14 CSV fields, got " + std::to_string( f.size() ) );
    }
    bench_row r;
    r.n = parse_field<unsigned>( f[0], line_no );
    r.m = parse_field<unsigned>( f[1], line_no );
    r.k = parse_field<unsigned>( f[2], line_no );
    r.samples = parse_field<std::uint64_t>( f[3], line_no );
    r.trials = parse_field<unsigned>( f[4], line_no );
    r.exact_ms = parse_field<double>( f[5], line_no );
    r.mc_ms = parse_field<double>( f[6], line_no );
    r.speedup = parse_field<double>( f[7], line_no );
    r.exact_med = parse_field<double>( f[8], line_no );
    r.mc_err_min = parse_field<double>( f[9], line_no );
    r.mc_err_q1 = parse_field<double>( f[10], line_no );
    r.mc_err_median = parse_field<double>( f[11], line_no );
    r.mc_err_q3 = parse_field<double>( f[12], line_no );
    r.mc_err_max = parse_field<double>( f[13], line_no );
    rows.push_back( r );
  }
  return rows;
}

std::vector<std::filesystem::path> generate_tables( unsigned k, unsigned slots, std::uint64_t seed,
                                                    const std::filesystem::path& dir )
{
  if ( slots == 0u )
  {
    throw config_error( "need at least one slot" );
  }
  std::filesystem::create_directories( dir );

  std::vector<std::filesystem::path> paths;
  nlohmann::json files = nlohmann::json::array();
  nlohmann::json slot_seeds = nlohmann::json::array();
  for ( unsigned i = 0; i < slots; ++i )
  {
    const auto slot_seed = derive_seed( seed, i );
    const auto path = dir / ( "slot_" + std::to_string( i ) + ".tt" );
    std::ofstream out( path, std::ios::binary );
    if ( !out )
    {
      throw std::runtime_error( "cannot write '" + path.string() + "'" );
    }
    out << "# random sub-adder, slot " << i << ", seed " << slot_seed << '\n';
    serialize_table( random_table( k, slot_seed ), out );
    paths.push_back( path );
    files.push_back( path.filename().string() );
    slot_seeds.push_back( slot_seed );
  }

  // no host or timestamp here so repeated runs stay byte-identical
  const nlohmann::json manifest = {{"command", "gen"}, {"k", k},          {"slots", slots},
                                   {"seed", seed},     {"slot_seeds", slot_seeds}, {"files", files},
                                   {"version", MEDCAL_VERSION}};
  std::ofstream out( dir / "manifest.json", std::ios::binary );
  out << manifest.dump( 2 ) << '\n';
  return paths;
}

std::uint64_t parse_count( const std::string& text )
{
  const auto caret = text.find( '^' );
  const auto parse = [&text]( std::string_view part ) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars( part.data(), part.data() + part.size(), v );
    if ( ec != std::errc{} || ptr != part.data() + part.size() || part.empty() )
    {
      throw config_error( "bad count '" + text + "'" );
    }
    return v;
  };
  if ( caret == std::string::npos )
  {
    return parse( text );
  }
  const auto base = parse( std::string_view( text ).substr( 0, caret ) );
  const auto exponent = parse( std::string_view( text ).substr( caret + 1 ) );
  if ( base != 2u || exponent > 62u )
  {
    throw config_error( "count '" + text + "' must be 2^e with e <= 62" );
  }
  return std::uint64_t{1} << exponent;
}

} // namespace medcal
