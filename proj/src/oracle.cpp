#include <medcal/oracle.hpp>

#include <medcal/errors.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace medcal
{

std::uint64_t error_distance( const adder_config& config, std::uint64_t a, std::uint64_t b )
{
  const auto exact = exact_add( config, a, b );
  const auto approx = approx_add( config, a, b );
  const std::int64_t carry_weight = mu( config.mode() ) * ( std::int64_t{1} << config.m() );
  const std::int64_t exact_value = carry_weight * exact.cout + static_cast<std::int64_t>( exact.sum );
  const std::int64_t approx_value = carry_weight * approx.cout + static_cast<std::int64_t>( approx.sum );
  const std::int64_t delta = exact_value - approx_value;
  return static_cast<std::uint64_t>( delta < 0 ? -delta : delta );
}

exact_metrics exhaustive_metrics( const adder_config& config )
{
  const unsigned m = config.m();
  if ( m > max_exhaustive_bits )
  {
    throw config_error( "exhaustive enumeration is limited to m <= " + std::to_string( max_exhaustive_bits ) +
                        ", got m=" + std::to_string( m ) );
  }
  const std::uint64_t side = std::uint64_t{1} << m;
  std::uint64_t ed_sum = 0;
  std::uint64_t ed_sq_sum = 0;
  std::uint64_t nonzero = 0;
  for ( std::uint64_t a = 0; a < side; ++a )
  {
    for ( std::uint64_t b = 0; b < side; ++b )
    {
      const auto ed = error_distance( config, a, b );
      ed_sum += ed;
      ed_sq_sum += ed * ed;
      nonzero += ed != 0u ? 1u : 0u;
    }
  }
  const big_int pairs = big_int( 1 ) << ( 2u * m );
  return {rational( big_int( ed_sum ), pairs ), rational( big_int( nonzero ), pairs ),
          rational( big_int( ed_sq_sum ), pairs )};
}

mc_stats mc_estimate( const adder_config& config, std::uint64_t samples, std::uint64_t seed,
                      std::optional<double> exact_med )
{
  if ( samples == 0u )
  {
    throw config_error( "sample count must be at least 1" );
  }
  const unsigned m = config.m();
  const std::uint64_t mask = ( std::uint64_t{1} << m ) - 1;

  mc_stats stats;
  stats.sample_count = samples;
  if ( 2u * m < 64u && samples >= ( std::uint64_t{1} << ( 2u * m ) ) )
  {
    // full coverage: enumerate instead of sampling
    std::uint64_t ed_sum = 0;
    for ( std::uint64_t a = 0; a <= mask; ++a )
    {
      for ( std::uint64_t b = 0; b <= mask; ++b )
      {
        ed_sum += error_distance( config, a, b );
      }
    }
    stats.exhaustive = true;
    stats.estimate = to_double( rational( big_int( ed_sum ), big_int( 1 ) << ( 2u * m ) ) );
  }
  else
  {
    std::mt19937_64 engine( seed );
    std::uint64_t ed_sum = 0;
    for ( std::uint64_t s = 0; s < samples; ++s )
    {
      const std::uint64_t a = engine() & mask;
      const std::uint64_t b = engine() & mask;
      ed_sum += error_distance( config, a, b );
    }
    stats.estimate = static_cast<double>( ed_sum ) / static_cast<double>( samples );
  }

  if ( exact_med )
  {
    const double err = std::abs( stats.estimate - *exact_med );
    stats.abs_error = err;
    stats.err_min = stats.err_q1 = stats.err_median = stats.err_q3 = stats.err_max = err;
  }
  return stats;
}

mc_stats mc_error_distribution( const adder_config& config, std::uint64_t samples, unsigned trials,
                                std::uint64_t seed )
{
  if ( trials < 5u )
  {
    throw config_error( "error distribution needs at least 5 trials, got " + std::to_string( trials ) );
  }
  const double exact = to_double( med_cal( config ).report.med );

  std::vector<double> errors;
  errors.reserve( trials );
  double estimate_sum = 0.0;
  bool exhaustive = true;
  for ( unsigned t = 0; t < trials; ++t )
  {
    const auto trial = mc_estimate( config, samples, seed + t, exact );
    errors.push_back( *trial.abs_error );
    estimate_sum += trial.estimate;
    exhaustive = exhaustive && trial.exhaustive;
  }

  mc_stats stats;
  stats.sample_count = samples;
  stats.trials = trials;
  stats.exhaustive = exhaustive;
  stats.estimate = estimate_sum / trials;
  double err_sum = 0.0;
  for ( const auto e : errors )
  {
    err_sum += e;
  }
  stats.abs_error = err_sum / trials;
  const auto summary = summarize( std::move( errors ) );
  stats.err_min = summary.min;
  stats.err_q1 = summary.q1;
  stats.err_median = summary.median;
  stats.err_q3 = summary.q3;
  stats.err_max = summary.max;
  return stats;
}

five_numbers summarize( std::vector<double> values )
{
  if ( values.empty() )
  {
    return {};
  }
  std::sort( values.begin(), values.end() );
  const auto quantile = [&values]( double q ) {
    const double pos = q * static_cast<double>( values.size() - 1 );
    const auto lo = static_cast<std::size_t>( std::floor( pos ) );
    const auto hi = std::min( lo + 1, values.size() - 1 );
    const double frac = pos - static_cast<double>( lo );
    return values[lo] + ( values[hi] - values[lo] ) * frac;
  };
  return {values.front(), quantile( 0.25 ), quantile( 0.5 ), quantile( 0.75 ), values.back()};
}

} // namespace medcal
