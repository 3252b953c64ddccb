#include <catch2/catch_amalgamated.hpp>

#include <medcal/errors.hpp>
#include <medcal/oracle.hpp>

#include "worked_trace.hpp"

#include <cmath>

using namespace medcal;

namespace
{

/* copies row (cin, min(a,b), max(a,b)) onto (cin, a, b) */
subadder_table symmetrized( const subadder_table& t )
{
  auto rows = t.rows();
  const std::uint32_t side = 1u << t.width();
  for ( std::uint32_t cin = 0; cin < 2; ++cin )
    for ( std::uint32_t a = 0; a < side; ++a )
      for ( std::uint32_t b = 0; b < a; ++b )
      {
        rows[t.row_index( cin, a, b )] = rows[t.row_index( cin, b, a )];
      }
  return subadder_table( t.width(), std::move( rows ) );
}

double sigma( const exact_metrics& m )
{
  return std::sqrt( to_double( m.msed ) - to_double( m.med ) * to_double( m.med ) );
}

} // namespace

TEST_CASE( "pairwise ED of the worked example", "[oracle]" )
{
  const auto config = worked_example_config();
  for ( std::uint64_t a = 0; a < 4; ++a )
    for ( std::uint64_t b = 0; b < 4; ++b )
    {
      REQUIRE( error_distance( config, a, b ) == medcal::test::worked_pair_ed[4 * a + b] );
    }
  CHECK( error_distance( config, 2, 0 ) == 4u );
}

TEST_CASE( "exhaustive metrics", "[oracle]" )
{
  const auto m = exhaustive_metrics( worked_example_config() );
  CHECK( m.med == rational( 24, 16 ) );
  CHECK( m.er == rational( 12, 16 ) );
  CHECK( m.msed == rational( 64, 16 ) );

  const auto zero = exhaustive_metrics( exact_config( 6, 2 ) );
  CHECK( zero.med == 0 );
  CHECK( zero.er == 0 );
  CHECK( zero.msed == 0 );

  CHECK_THROWS_AS( exhaustive_metrics( exact_config( 16, 1 ) ), config_error );
}

TEST_CASE( "oracle and engine agree", "[oracle][property]" )
{
  for ( std::uint64_t seed = 0; seed < 60; ++seed )
  {
    const unsigned k = 1u + static_cast<unsigned>( seed % 2u );
    const unsigned m = k * ( 1u + static_cast<unsigned>( ( seed / 2 ) % ( 8u / k ) ) );
    const auto config = random_config( m, k, seed * 7 + 3 );
    const auto oracle = exhaustive_metrics( config );
    const auto report = med_cal( config ).report;
    REQUIRE( report.med == oracle.med );
    REQUIRE( report.er == oracle.er );
    REQUIRE( report.msed == oracle.msed );
  }
}

TEST_CASE( "symmetric cells give symmetric ED", "[oracle][property]" )
{
  for ( std::uint64_t seed = 0; seed < 10; ++seed )
  {
    const unsigned k = 1u + static_cast<unsigned>( seed % 2u );
    const auto base = random_config( 4, k, seed + 40 );
    std::vector<subadder_table> slots;
    for ( const auto& t : base.slots() )
    {
      slots.push_back( symmetrized( t ) );
    }
    const adder_config config( 4, 4, k, std::move( slots ) );
    for ( std::uint64_t a = 0; a < 16; ++a )
      for ( std::uint64_t b = 0; b < 16; ++b )
      {
        REQUIRE( error_distance( config, a, b ) == error_distance( config, b, a ) );
      }
  }
}

TEST_CASE( "Monte Carlo estimates", "[oracle][mc]" )
{
  SECTION( "exact adder" )
  {
    CHECK( mc_estimate( exact_config( 8, 1 ), 1000, 5 ).estimate == 0.0 );
  }
  SECTION( "full coverage switches to enumeration" )
  {
    const auto s = mc_estimate( worked_example_config(), 1u << 16, 3, 1.5 );
    CHECK( s.exhaustive );
    CHECK( std::abs( s.estimate - 1.5 ) < 0.1 );
    CHECK( *s.abs_error == 0.0 );
  }
  SECTION( "sampling stays within 20 standard errors" )
  {
    const auto config = random_config( 8, 1, 1234 );
    const auto exact = exhaustive_metrics( config );
    const std::uint64_t samples = 1u << 12;
    const auto s = mc_estimate( config, samples, 99, to_double( exact.med ) );
    CHECK_FALSE( s.exhaustive );
    CHECK( *s.abs_error <= 20.0 * sigma( exact ) / std::sqrt( double( samples ) ) );
  }
  SECTION( "deterministic given the seed" )
  {
    const auto config = random_config( 10, 1, 8 );
    CHECK( mc_estimate( config, 5000, 17 ).estimate == mc_estimate( config, 5000, 17 ).estimate );
  }
  SECTION( "zero samples rejected" )
  {
    CHECK_THROWS_AS( mc_estimate( exact_config( 4, 1 ), 0, 1 ), config_error );
  }
}

TEST_CASE( "Monte Carlo converges over many seeds", "[oracle][mc][property]" )
{
  const auto config = random_config( 10, 1, 4321 );
  const auto exact = exhaustive_metrics( config );
  const std::uint64_t samples = 1u << 10;
  double sum = 0.0;
  for ( std::uint64_t seed = 0; seed < 100; ++seed )
  {
    sum += mc_estimate( config, samples, seed ).estimate;
  }
  const double combined_se = sigma( exact ) / std::sqrt( 100.0 * samples );
  CHECK( std::abs( sum / 100.0 - to_double( exact.med ) ) <= 5.0 * combined_se );
}

TEST_CASE( "Monte Carlo error distribution", "[oracle][mc]" )
{
  const auto exact = mc_error_distribution( exact_config( 8, 1 ), 256, 5, 1 );
  CHECK( exact.err_min == 0.0 );
  CHECK( exact.err_max == 0.0 );

  const auto full = mc_error_distribution( random_config( 6, 1, 5 ), 1u << 12, 5, 1 );
  CHECK( full.exhaustive );
  CHECK( full.err_median == 0.0 );
  CHECK( full.err_max == 0.0 );

  const auto sampled = mc_error_distribution( random_config( 12, 1, 6 ), 1u << 12, 50, 1 );
  CHECK( sampled.err_median > 0.0 );
  CHECK( sampled.err_min <= sampled.err_q1 );
  CHECK( sampled.err_q1 <= sampled.err_median );
  CHECK( sampled.err_median <= sampled.err_q3 );
  CHECK( sampled.err_q3 <= sampled.err_max );

  CHECK_THROWS_AS( mc_error_distribution( exact_config( 4, 1 ), 16, 4, 1 ), config_error );
}

TEST_CASE( "five number summary", "[oracle]" )
{
  const auto s = summarize( {5.0, 1.0, 3.0, 2.0, 4.0} );
  CHECK( s.min == 1.0 );
  CHECK( s.q1 == 2.0 );
  CHECK( s.median == 3.0 );
  CHECK( s.q3 == 4.0 );
  CHECK( s.max == 5.0 );
  CHECK( summarize( {1.0, 2.0} ).median == 1.5 );
}
