#include <catch2/catch_amalgamated.hpp>

#include <medcal/errors.hpp>
#include <medcal/subadder.hpp>

#include <random>
#include <string>

using namespace medcal;

namespace
{

const char* exact_k1_text = R"(# exact full adder
k=1
0 0 0 : 0 0
0 0 1 : 0 1
0 1 0 : 0 1
0 1 1 : 1 0
1 0 0 : 0 1
1 0 1 : 1 0
1 1 0 : 1 0
1 1 1 : 1 1
)";

// MSB cell of the 2-bit worked example, rows deliberately out of order
const char* example_msb_text = R"(k=1
0 1 0 : 1 1
0 0 0 : 0 0
0 0 1 : 0 1
0 1 1 : 1 1
1 0 0 : 0 1
1 0 1 : 1 0
1 1 1 : 1 0
1 1 0 : 1 1
)";

std::string parse_failure( const std::string& text )
{
  try
  {
    parse_table_string( text );
  }
  catch ( const parse_error& e )
  {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE( "parse an exact full adder", "[subadder]" )
{
  const auto table = parse_table_string( exact_k1_text );
  CHECK( table.width() == 1u );
  CHECK( table.num_rows() == 8u );
  CHECK( table.is_exact() );
  CHECK( table == exact_table( 1 ) );
}

TEST_CASE( "parse the example MSB cell", "[subadder]" )
{
  const auto table = parse_table_string( example_msb_text );
  CHECK( table.evaluate( 0, 1, 0 ) == add_result{1, 1} );
  CHECK( table.evaluate( 1, 1, 1 ) == add_result{1, 0} );
  CHECK_FALSE( table.is_exact() );
  CHECK( table == worked_example_msb_table() );
}

TEST_CASE( "parse errors carry line numbers", "[subadder]" )
{
  std::string seven = exact_k1_text;
  seven.erase( seven.find( "1 1 1 : 1 1\n" ) );
  CHECK( parse_failure( seven ) == "line 10: missing row (1,1,1)" );

  CHECK( parse_failure( "k=1\n0 0 0 : 0 0\n0 0 0 : 0 1\n" ) == "line 3: duplicate row (0,0,0), first given on line 2" );
  CHECK( parse_failure( "k=1\n0 0 0 0 0\n" ).starts_with( "line 2: malformed row" ) );
  CHECK( parse_failure( "k=1\n0 0 0 : 2 0\n" ).starts_with( "line 2: out-of-range output" ) );
  CHECK( parse_failure( "k=1\n0 0 0 : 0 10\n" ).starts_with( "line 2: out-of-range output" ) );
  CHECK( parse_failure( "k=2\n0 0 00 : 0 00\n" ).starts_with( "line 2: malformed row" ) );
  CHECK( parse_failure( "# only a comment\n0 0 0 : 0 0\n" ).starts_with( "line 2: expected header" ) );
  CHECK( parse_failure( "" ).starts_with( "line 1: missing header" ) );
  CHECK( parse_failure( "k=0\n" ).starts_with( "line 1: k must be" ) );
}

TEST_CASE( "exact tables", "[subadder]" )
{
  CHECK( exact_table( 1 ).evaluate( 1, 1, 1 ) == add_result{1, 1} );
  CHECK( exact_table( 2 ).evaluate( 0, 3, 1 ) == add_result{1, 0} );
  CHECK( exact_table( 1 ).evaluate( 0, 0, 0 ) == add_result{0, 0} );
  CHECK( exact_table( 1 ).evaluate( 0, 1, 0 ) == add_result{0, 1} );

  for ( unsigned k = 1; k <= 3; ++k )
  {
    const auto table = exact_table( k );
    for ( std::uint32_t cin = 0; cin < 2; ++cin )
      for ( std::uint32_t a = 0; a < ( 1u << k ); ++a )
        for ( std::uint32_t b = 0; b < ( 1u << k ); ++b )
        {
          const auto r = table.evaluate( cin, a, b );
          REQUIRE( ( r.cout << k ) + r.sum == a + b + cin );
        }
  }
}

TEST_CASE( "random tables are seeded and deterministic", "[subadder]" )
{
  CHECK( random_table( 1, 42 ) == random_table( 1, 42 ) );

  std::uint64_t other = 43;
  while ( random_table( 1, other ) == random_table( 1, 42 ) )
  {
    ++other;
  }
  CHECK( other < 60u );

  const auto k2 = random_table( 2, 7 );
  CHECK( k2.num_rows() == 32u );
  CHECK_NOTHROW( validate_table( 2, k2.rows() ) );
}

TEST_CASE( "example cells", "[subadder]" )
{
  const auto lsb = worked_example_lsb_table();
  CHECK( lsb.evaluate( 0, 0, 1 ) == add_result{1, 0} );
  CHECK( lsb.evaluate( 0, 1, 0 ) == add_result{0, 1} );
  CHECK( lsb.evaluate( 0, 1, 1 ) == add_result{1, 1} );
  CHECK( worked_example_msb_table().evaluate( 1, 1, 1 ) == add_result{1, 0} );
}

TEST_CASE( "approximate addition chains slots", "[subadder]" )
{
  const auto example = worked_example_config();
  const auto r = approx_add( example, 2, 1 );
  CHECK( r == add_result{1, 2} );
  CHECK( ( r.cout << 2 ) + r.sum == 6u );
  CHECK( approx_add( example, 0, 0 ) == add_result{0, 0} );

  // all-exact chains reproduce integer addition
  for ( unsigned m = 1; m <= 10; ++m )
  {
    for ( unsigned k : {1u, 2u} )
    {
      if ( m % k != 0u )
      {
        continue;
      }
      const auto config = exact_config( m, k );
      const std::uint64_t side = std::uint64_t{1} << m;
      for ( std::uint64_t a = 0; a < side; ++a )
        for ( std::uint64_t b = 0; b < side; ++b )
        {
          const auto s = approx_add( config, a, b );
          REQUIRE( ( std::uint64_t{s.cout} << m ) + s.sum == a + b );
        }
    }
  }
}

TEST_CASE( "serialize and parse round-trip", "[subadder][property]" )
{
  for ( unsigned k = 1; k <= 3; ++k )
  {
    for ( std::uint64_t seed = 0; seed < 20; ++seed )
    {
      const auto table = random_table( k, seed );
      const auto text = serialize_table( table );
      const auto back = parse_table_string( text );
      REQUIRE( back == table );
      REQUIRE( serialize_table( back ) == text );
    }
  }
}

TEST_CASE( "validation catches random corruption", "[subadder][property]" )
{
  std::mt19937_64 rng( 2024 );
  for ( int trial = 0; trial < 300; ++trial )
  {
    const unsigned k = 1u + static_cast<unsigned>( rng() % 3u );
    auto rows = random_table( k, rng() ).rows();
    switch ( rng() % 4u )
    {
    case 0:
      rows.pop_back();
      break;
    case 1:
      rows.push_back( rows.front() );
      break;
    case 2:
      rows[rng() % rows.size()].sum = ( 1u << k ) + static_cast<std::uint32_t>( rng() % 5u );
      break;
    default:
      rows[rng() % rows.size()].cout = static_cast<std::uint8_t>( 2u + rng() % 200u );
      break;
    }
    REQUIRE_THROWS_AS( subadder_table( k, rows ), config_error );
  }
}

TEST_CASE( "configuration invariants", "[subadder]" )
{
  CHECK_THROWS_WITH( exact_config( 3, 2 ), Catch::Matchers::ContainsSubstring( "k must divide m" ) );
  CHECK_THROWS_AS( exact_config( 29, 1, 32 ), config_error );
  CHECK_THROWS_AS( exact_config( 8, 1, 4 ), config_error );
  CHECK_THROWS_AS( adder_config( 4, 4, 2, {exact_table( 2 )} ), config_error );
  CHECK_THROWS_AS( adder_config( 2, 2, 1, {exact_table( 1 ), exact_table( 2 )} ), config_error );
  CHECK_THROWS_AS( adder_config( 2, 2, 1, {exact_table( 1 ), exact_table( 1 )}, sign_mode::unsigned_mode, 2 ),
                   config_error );
  CHECK_NOTHROW( exact_config( 28, 4, 32 ) );

  const auto config = random_config( 6, 2, 11, 16 );
  CHECK( config.n() == 16u );
  CHECK( config.num_slots() == 3u );
  CHECK( config == random_config( 6, 2, 11, 16 ) );
}
