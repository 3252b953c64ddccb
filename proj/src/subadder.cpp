#include <medcal/subadder.hpp>

#include <medcal/errors.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>

namespace medcal
{

namespace
{

std::string row_label( std::uint32_t cin, std::uint32_t a, std::uint32_t b, unsigned width )
{
  return "(" + std::to_string( cin ) + "," + to_binary( a, width ) + "," + to_binary( b, width ) + ")";
}

std::string_view trim( std::string_view s )
{
  const auto first = s.find_first_not_of( " \t\r\n" );
  if ( first == std::string_view::npos )
  {
    return {};
  }
  const auto last = s.find_last_not_of( " \t\r\n" );
  return s.substr( first, last - first + 1 );
}

std::vector<std::string_view> split_ws( std::string_view s )
{
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while ( pos < s.size() )
  {
    const auto start = s.find_first_not_of( " \t", pos );
    if ( start == std::string_view::npos )
    {
      break;
    }
    auto end = s.find_first_of( " \t", start );
    if ( end == std::string_view::npos )
    {
      end = s.size();
    }
    tokens.push_back( s.substr( start, end - start ) );
    pos = end;
  }
  return tokens;
}

std::optional<std::uint64_t> parse_bits( std::string_view token )
{
  if ( token.empty() || token.size() > 63 )
  {
    return std::nullopt;
  }
  std::uint64_t value = 0;
  for ( const char c : token )
  {
    if ( c != '0' && c != '1' )
    {
      return std::nullopt;
    }
    value = ( value << 1 ) | static_cast<std::uint64_t>( c - '0' );
  }
  return value;
}

} // namespace

std::string to_binary( std::uint64_t value, unsigned width )
{
  std::string out( width, '0' );
  for ( unsigned i = 0; i < width; ++i )
  {
    if ( ( value >> i ) & 1u )
    {
      out[width - 1 - i] = '1';
    }
  }
  return out;
}

void validate_table( unsigned width, const std::vector<table_row>& rows )
{
  if ( width == 0u || width > max_subadder_width )
  {
    throw config_error( "sub-adder width must be in [1, " + std::to_string( max_subadder_width ) + "], got " +
                        std::to_string( width ) );
  }
  const std::size_t expected = std::size_t{1} << ( 2u * width + 1u );
  if ( rows.size() != expected )
  {
    throw config_error( "k=" + std::to_string( width ) + " table needs " + std::to_string( expected ) + " rows, got " +
                        std::to_string( rows.size() ) );
  }
  const std::uint64_t limit = std::uint64_t{1} << width;
  for ( std::size_t i = 0; i < rows.size(); ++i )
  {
    if ( rows[i].cout > 1u || rows[i].sum >= limit )
    {
      const auto mask = static_cast<std::uint32_t>( limit - 1 );
      throw config_error( "out-of-range output at row " +
                          row_label( static_cast<std::uint32_t>( i >> ( 2u * width ) ),
                                     static_cast<std::uint32_t>( i >> width ) & mask,
                                     static_cast<std::uint32_t>( i ) & mask, width ) );
    }
  }
}

subadder_table::subadder_table( unsigned width, std::vector<table_row> rows )
    : width_( width ), rows_( std::move( rows ) )
{
  validate_table( width_, rows_ );
}

bool subadder_table::is_exact() const
{
  const std::uint32_t side = 1u << width_;
  for ( std::uint32_t cin = 0; cin < 2u; ++cin )
  {
    for ( std::uint32_t a = 0; a < side; ++a )
    {
      for ( std::uint32_t b = 0; b < side; ++b )
      {
        const auto r = evaluate( cin, a, b );
        if ( ( static_cast<std::uint64_t>( r.cout ) << width_ ) + r.sum != std::uint64_t{a} + b + cin )
        {
          return false;
        }
      }
    }
  }
  return true;
}

subadder_table exact_table( unsigned width )
{
  if ( width == 0u || width > max_subadder_width )
  {
    throw config_error( "sub-adder width must be in [1, " + std::to_string( max_subadder_width ) + "]" );
  }
  const std::uint32_t side = 1u << width;
  std::vector<table_row> rows;
  rows.reserve( std::size_t{2} * side * side );
  for ( std::uint32_t cin = 0; cin < 2u; ++cin )
  {
    for ( std::uint32_t a = 0; a < side; ++a )
    {
      for ( std::uint32_t b = 0; b < side; ++b )
      {
        const std::uint64_t total = std::uint64_t{a} + b + cin;
        rows.push_back( {static_cast<std::uint32_t>( total & ( side - 1 ) ), static_cast<std::uint8_t>( total >> width )} );
      }
    }
  }
  return subadder_table( width, std::move( rows ) );
}

subadder_table random_table( unsigned width, std::uint64_t seed )
{
  if ( width == 0u || width > max_subadder_width )
  {
    throw config_error( "sub-adder width must be in [1, " + std::to_string( max_subadder_width ) + "]" );
  }
  std::mt19937_64 engine( seed );
  const std::size_t count = std::size_t{1} << ( 2u * width + 1u );
  const std::uint64_t mask = ( std::uint64_t{1} << width ) - 1;
  std::vector<table_row> rows( count );
  for ( auto& row : rows )
  {
    const std::uint64_t draw = engine();
    row.sum = static_cast<std::uint32_t>( draw & mask );
    row.cout = static_cast<std::uint8_t>( ( draw >> width ) & 1u );
  }
  return subadder_table( width, std::move( rows ) );
}

subadder_table parse_table( std::istream& in )
{
  std::optional<unsigned> width;
  std::vector<table_row> rows;
  std::vector<std::size_t> defined_on;
  std::size_t line_no = 0;
  std::string line;

  while ( std::getline( in, line ) )
  {
    ++line_no;
    const auto text = trim( line );
    if ( text.empty() || text.front() == '#' )
    {
      continue;
    }

    if ( !width )
    {
      if ( !text.starts_with( "k=" ) )
      {
        throw parse_error( line_no, "expected header 'k=<int>'" );
      }
      const auto digits = trim( text.substr( 2 ) );
      unsigned value = 0;
      const auto [ptr, ec] = std::from_chars( digits.data(), digits.data() + digits.size(), value );
      if ( ec != std::errc{} || ptr != digits.data() + digits.size() )
      {
        throw parse_error( line_no, "malformed header '" + std::string( text ) + "'" );
      }
      if ( value == 0u || value > max_subadder_width )
      {
        throw parse_error( line_no, "k must be in [1, " + std::to_string( max_subadder_width ) + "]" );
      }
      width = value;
      const std::size_t count = std::size_t{1} << ( 2u * value + 1u );
      rows.assign( count, table_row{} );
      defined_on.assign( count, 0u );
      continue;
    }

    const unsigned k = *width;
    const auto tokens = split_ws( text );
    if ( tokens.size() != 6u || tokens[3] != ":" )
    {
      throw parse_error( line_no, "malformed row, expected '<cin> <a> <b> : <cout> <s>'" );
    }
    const auto cin = parse_bits( tokens[0] );
    const auto a = parse_bits( tokens[1] );
    const auto b = parse_bits( tokens[2] );
    const auto cout = parse_bits( tokens[4] );
    const auto s = parse_bits( tokens[5] );
    if ( !cin || !a || !b || tokens[0].size() != 1u || tokens[1].size() != k || tokens[2].size() != k )
    {
      throw parse_error( line_no, "malformed row, operands must be 1/" + std::to_string( k ) + "/" + std::to_string( k ) +
                                      " binary digits" );
    }
    if ( !cout || !s || tokens[4].size() != 1u || tokens[5].size() != k )
    {
      const auto numeric = []( std::string_view t ) {
        return std::all_of( t.begin(), t.end(), []( char c ) { return c >= '0' && c <= '9'; } );
      };
      if ( !numeric( tokens[4] ) || !numeric( tokens[5] ) )
      {
        throw parse_error( line_no, "malformed row, outputs must be binary digits" );
      }
      throw parse_error( line_no, "out-of-range output, expected 1-bit carry and " + std::to_string( k ) + "-bit sum" );
    }

    const auto c = static_cast<std::uint32_t>( *cin );
    const auto av = static_cast<std::uint32_t>( *a );
    const auto bv = static_cast<std::uint32_t>( *b );
    const std::size_t index = ( std::size_t{c} << ( 2u * k ) ) | ( std::size_t{av} << k ) | bv;
    if ( defined_on[index] != 0u )
    {
      throw parse_error( line_no, "duplicate row " + row_label( c, av, bv, k ) + ", first given on line " +
                                      std::to_string( defined_on[index] ) );
    }
    defined_on[index] = line_no;
    rows[index] = {static_cast<std::uint32_t>( *s ), static_cast<std::uint8_t>( *cout )};
  }

  if ( !width )
  {
    throw parse_error( line_no + 1, "missing header 'k=<int>'" );
  }
  const unsigned k = *width;
  const std::uint32_t mask = ( 1u << k ) - 1u;
  for ( std::size_t i = 0; i < defined_on.size(); ++i )
  {
    if ( defined_on[i] == 0u )
    {
      throw parse_error( line_no + 1, "missing row " + row_label( static_cast<std::uint32_t>( i >> ( 2u * k ) ),
                                                                 static_cast<std::uint32_t>( i >> k ) & mask,
                                                                 static_cast<std::uint32_t>( i ) & mask, k ) );
    }
  }
  return subadder_table( k, std::move( rows ) );
}

subadder_table parse_table_string( std::string_view text )
{
  std::istringstream in{std::string( text )};
  return parse_table( in );
}

subadder_table load_table( const std::string& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw config_error( "cannot open table file '" + path + "'" );
  }
  try
  {
    return parse_table( in );
  }
  catch ( const parse_error& e )
  {
    throw parse_error( e.line(), e.detail(), path );
  }
}

void serialize_table( const subadder_table& table, std::ostream& out )
{
  const unsigned k = table.width();
  const std::uint32_t side = 1u << k;
  out << "k=" << k << '\n';
  for ( std::uint32_t cin = 0; cin < 2u; ++cin )
  {
    for ( std::uint32_t a = 0; a < side; ++a )
    {
      for ( std::uint32_t b = 0; b < side; ++b )
      {
        const auto r = table.evaluate( cin, a, b );
        out << cin << ' ' << to_binary( a, k ) << ' ' << to_binary( b, k ) << " : " << r.cout << ' '
            << to_binary( r.sum, k ) << '\n';
      }
    }
  }
}

std::string serialize_table( const subadder_table& table )
{
  std::ostringstream out;
  serialize_table( table, out );
  return out.str();
}

void validate_geometry( unsigned n, unsigned m, unsigned k )
{
  if ( k == 0u )
  {
    throw config_error( "k must be positive" );
  }
  if ( m == 0u )
  {
    throw config_error( "m must be positive" );
  }
  if ( m % k != 0u )
  {
    throw config_error( "k must divide m (m=" + std::to_string( m ) + ", k=" + std::to_string( k ) + ")" );
  }
  if ( m > n )
  {
    throw config_error( "m must not exceed n (m=" + std::to_string( m ) + ", n=" + std::to_string( n ) + ")" );
  }
  if ( m > max_approx_bits )
  {
    throw config_error( "m=" + std::to_string( m ) + " exceeds the dense-histogram limit of " +
                        std::to_string( max_approx_bits ) );
  }
  if ( k > max_subadder_width )
  {
    throw config_error( "k=" + std::to_string( k ) + " exceeds the table width limit of " +
                        std::to_string( max_subadder_width ) );
  }
  if ( n > 64u )
  {
    throw config_error( "n must not exceed 64" );
  }
}

adder_config::adder_config( unsigned n, unsigned m, unsigned k, std::vector<subadder_table> slots, sign_mode mode,
                            std::uint32_t initial_carry )
    : n_( n ), m_( m ), k_( k ), slots_( std::move( slots ) ), mode_( mode ), initial_carry_( initial_carry )
{
  validate_geometry( n_, m_, k_ );
  if ( slots_.size() != m_ / k_ )
  {
    throw config_error( "expected " + std::to_string( m_ / k_ ) + " sub-adder slots, got " +
                        std::to_string( slots_.size() ) );
  }
  for ( std::size_t i = 0; i < slots_.size(); ++i )
  {
    if ( slots_[i].width() != k_ )
    {
      throw config_error( "slot " + std::to_string( i ) + " has width " + std::to_string( slots_[i].width() ) +
                          ", expected k=" + std::to_string( k_ ) );
    }
  }
  if ( initial_carry_ > 1u )
  {
    throw config_error( "initial carry must be 0 or 1" );
  }
}

add_result approx_add( const adder_config& config, std::uint64_t a, std::uint64_t b )
{
  const unsigned k = config.k();
  const std::uint64_t mask = ( std::uint64_t{1} << k ) - 1;
  std::uint32_t carry = config.initial_carry();
  std::uint64_t sum = 0;
  unsigned shift = 0;
  for ( const auto& table : config.slots() )
  {
    const auto r = table.evaluate( carry, static_cast<std::uint32_t>( ( a >> shift ) & mask ),
                                   static_cast<std::uint32_t>( ( b >> shift ) & mask ) );
    sum |= r.sum << shift;
    carry = r.cout;
    shift += k;
  }
  return {carry, sum};
}

add_result exact_add( const adder_config& config, std::uint64_t a, std::uint64_t b )
{
  const std::uint64_t total = a + b + config.initial_carry();
  const unsigned m = config.m();
  return {static_cast<std::uint32_t>( total >> m ), total & ( ( std::uint64_t{1} << m ) - 1 )};
}

adder_config uniform_config( unsigned m, const subadder_table& table, unsigned n, sign_mode mode,
                             std::uint32_t initial_carry )
{
  const unsigned k = table.width();
  validate_geometry( n == 0u ? m : n, m, k );
  return adder_config( n == 0u ? m : n, m, k, std::vector<subadder_table>( m / k, table ), mode, initial_carry );
}

adder_config exact_config( unsigned m, unsigned k, unsigned n )
{
  validate_geometry( n == 0u ? m : n, m, k );
  return uniform_config( m, exact_table( k ), n );
}

subadder_table worked_example_lsb_table()
{
  // half adder 01 -> carry, 10 -> sum, 11 -> both; cin=1 rows are exact
  return subadder_table( 1u, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 1}, {1, 1}} );
}

subadder_table worked_example_msb_table()
{
  return subadder_table( 1u, {{0, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 0}, {0, 1}, {1, 1}, {0, 1}} );
}

adder_config worked_example_config()
{
  return adder_config( 2u, 2u, 1u, {worked_example_lsb_table(), worked_example_msb_table()} );
}

std::uint64_t derive_seed( std::uint64_t seed, std::uint64_t index ) noexcept
{
  std::uint64_t z = seed + ( index + 1u ) * 0x9e3779b97f4a7c15ull;
  z = ( z ^ ( z >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  z = ( z ^ ( z >> 27 ) ) * 0x94d049bb133111ebull;
  return z ^ ( z >> 31 );
}

adder_config random_config( unsigned m, unsigned k, std::uint64_t seed, unsigned n )
{
  validate_geometry( n == 0u ? m : n, m, k );
  std::vector<subadder_table> slots;
  slots.reserve( m / k );
  for ( unsigned i = 0; i < m / k; ++i )
  {
    slots.push_back( random_table( k, derive_seed( seed, i ) ) );
  }
  return adder_config( n == 0u ? m : n, m, k, std::move( slots ) );
}

} // namespace medcal
