#include <medcal/medcore.hpp>

#include <medcal/errors.hpp>

#include <algorithm>
#include <ostream>
#include <string>

namespace medcal
{

namespace
{

using u128 = unsigned __int128;
using i128 = __int128;

u128 abs128( i128 v ) { return v < 0 ? static_cast<u128>( -v ) : static_cast<u128>( v ); }

std::string pair_label( carry_pair pair ) { return std::to_string( pair.exact ) + std::to_string( pair.approx ); }

rational over_input_space( const big_int& numerator, unsigned m )
{
  return rational( numerator, big_int( 1 ) << ( 2u * m ) );
}

void require_final( const error_histogram& quartet, unsigned m )
{
  if ( quartet.bits_processed() != m )
  {
    throw internal_fault( "quartet has processed " + std::to_string( quartet.bits_processed() ) + " bits, expected " +
                          std::to_string( m ) );
  }
}

} // namespace

bool count_matrix::is_zero() const noexcept
{
  return std::all_of( cells_.begin(), cells_.end(), []( auto c ) { return c == 0u; } );
}

unsigned __int128 count_matrix::total() const noexcept
{
  u128 sum = 0;
  for ( const auto c : cells_ )
  {
    sum += c;
  }
  return sum;
}

error_histogram::error_histogram( unsigned bits_processed ) : bits_( bits_processed )
{
  for ( auto& mat : mats_ )
  {
    mat = count_matrix( rows() );
  }
}

unsigned __int128 error_histogram::total() const noexcept
{
  u128 sum = 0;
  for ( const auto& mat : mats_ )
  {
    sum += mat.total();
  }
  return sum;
}

error_histogram init_histogram( std::uint32_t initial_carry )
{
  if ( initial_carry > 1u )
  {
    throw config_error( "initial carry must be 0 or 1" );
  }
  error_histogram h( 0u );
  h.matrix( carry_pair{initial_carry, initial_carry} ).at( 0, 0 ) = 1u;
  return h;
}

std::int64_t compute_diff( std::uint64_t sum_exact, std::uint64_t sum_approx, unsigned p )
{
  return ( static_cast<std::int64_t>( sum_exact ) - static_cast<std::int64_t>( sum_approx ) ) * ( std::int64_t{1} << p );
}

std::uint64_t map_and_accumulate( const count_matrix& lmat, count_matrix& hmat, std::int64_t diff )
{
  const std::size_t lrows = lmat.rows();
  const auto src = lmat.cells();
  auto dst = hmat.cells();

  if ( diff == 0 )
  {
    if ( hmat.rows() < lrows )
    {
      throw internal_fault( "map_and_accumulate: output matrix smaller than input" );
    }
    for ( std::size_t i = 0; i < src.size(); ++i )
    {
      dst[i] += src[i];
    }
    return lrows;
  }

  const auto mag = static_cast<std::uint64_t>( diff < 0 ? -diff : diff );
  if ( mag < lrows )
  {
    throw internal_fault( "map_and_accumulate: |diff|=" + std::to_string( mag ) + " would flip the sign of row " +
                          std::to_string( lrows - 1 ) );
  }
  if ( mag + lrows > hmat.rows() )
  {
    throw internal_fault( "map_and_accumulate: target row " + std::to_string( mag + lrows - 1 ) + " out of range [0, " +
                          std::to_string( hmat.rows() - 1 ) + "]" );
  }

  // entries whose sign agrees with diff move away from zero, the others towards it
  const unsigned col = diff > 0 ? 0u : 1u;
  const unsigned same = col;
  const unsigned opposite = 1u - col;
  for ( std::size_t r = 0; r < lrows; ++r )
  {
    dst[2u * ( mag + r ) + col] += src[2u * r + same];
    dst[2u * ( mag - r ) + col] += src[2u * r + opposite];
  }
  return lrows;
}

error_histogram run_slot( const adder_config& config, unsigned slot, const error_histogram& input,
                          work_counters& counters, const trace_observer& observer )
{
  const unsigned k = config.k();
  const unsigned p = slot * k;
  if ( slot >= config.num_slots() || input.bits_processed() != p )
  {
    throw internal_fault( "run_slot: slot " + std::to_string( slot ) + " expects " + std::to_string( p ) +
                          " processed bits, got " + std::to_string( input.bits_processed() ) );
  }

  const auto& table = config.slot( slot );
  error_histogram output( p + k );

  std::array<bool, 4> live{};
  for ( unsigned i = 0; i < 4u; ++i )
  {
    live[i] = !input.matrix( i ).is_zero();
  }
  const bool first_slot = p == 0u;

  const std::uint32_t side = 1u << k;
  const std::uint32_t mask = side - 1u;
  for ( std::uint32_t a = 0; a < side; ++a )
  {
    for ( std::uint32_t b = 0; b < side; ++b )
    {
      for ( unsigned i = 0; i < 4u; ++i )
      {
        // before the first slot only the initial carry pair exists
        if ( first_slot && !live[i] )
        {
          continue;
        }
        ++counters.iterations;
        const auto cin = carry_pair::from_index( i );

        trace_record record;
        if ( observer )
        {
          record.iteration = counters.iterations;
          record.slot = slot;
          record.carry_in = cin;
          record.a = a;
          record.b = b;
        }
        if ( !live[i] )
        {
          if ( observer )
          {
            observer( record, output );
          }
          continue;
        }

        const std::uint32_t total = a + b + cin.exact;
        const add_result exact{total >> k, total & mask};
        const add_result approx = table.evaluate( cin.approx, a, b );
        const auto diff = compute_diff( exact.sum, approx.sum, p );
        const carry_pair cout{exact.cout, approx.cout};

        counters.row_copies += map_and_accumulate( input.matrix( i ), output.matrix( cout ), diff );

        if ( observer )
        {
          record.exact = exact;
          record.approx = approx;
          record.diff = diff;
          record.touched = cout;
          observer( record, output );
        }
      }
    }
  }
  return output;
}

med_result med_cal( const adder_config& config, const trace_observer& observer )
{
  const auto start = std::chrono::steady_clock::now();

  work_counters counters;
  error_histogram quartet = init_histogram( config.initial_carry() );
  for ( unsigned slot = 0; slot < config.num_slots(); ++slot )
  {
    quartet = run_slot( config, slot, quartet, counters, observer );
  }

  const unsigned m = config.m();
  med_report report;
  big_int ed_sum = 0;
  for ( unsigned i = 0; i < 4u; ++i )
  {
    report.ed_tot[i] = finalize_ed( quartet.matrix( i ), carry_pair::from_index( i ), m, config.mode() );
    ed_sum += report.ed_tot[i];
  }
  report.med = over_input_space( ed_sum, m );
  report.er = er_from_quartet( quartet, m );
  report.msed = msed_from_quartet( quartet, m, config.mode() );
  report.iteration_count = counters.iterations;
  report.row_copies = counters.row_copies;
  report.iteration_bound = iteration_bound( m, config.k() );
  report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>( std::chrono::steady_clock::now() - start );

  return {std::move( quartet ), std::move( report )};
}

big_int finalize_ed( const count_matrix& matrix, carry_pair cout, unsigned m, sign_mode mode )
{
  if ( matrix.rows() != ( std::size_t{1} << m ) )
  {
    throw internal_fault( "finalize_ed: matrix has " + std::to_string( matrix.rows() ) + " rows, expected 2^" +
                          std::to_string( m ) );
  }
  if ( cout.exact == cout.approx )
  {
    u128 ed = 0;
    for ( std::size_t d = 0; d < matrix.rows(); ++d )
    {
      ed += ( u128{matrix.at( d, 0 )} + matrix.at( d, 1 ) ) * d;
    }
    return to_big_int( ed );
  }

  u128 count = 0;
  i128 signed_sum = 0;
  for ( std::size_t d = 0; d < matrix.rows(); ++d )
  {
    const u128 pos = matrix.at( d, 0 );
    const u128 neg = matrix.at( d, 1 );
    count += pos + neg;
    signed_sum += ( static_cast<i128>( pos ) - static_cast<i128>( neg ) ) * static_cast<i128>( d );
  }
  const i128 carry_term = static_cast<i128>( mu( mode ) ) * ( i128{1} << m ) *
                          ( static_cast<i128>( cout.exact ) - static_cast<i128>( cout.approx ) ) *
                          static_cast<i128>( count );
  return to_big_int( abs128( carry_term + signed_sum ) );
}

rational med_from_quartet( const error_histogram& quartet, unsigned m, sign_mode mode )
{
  require_final( quartet, m );
  big_int sum = 0;
  for ( unsigned i = 0; i < 4u; ++i )
  {
    sum += finalize_ed( quartet.matrix( i ), carry_pair::from_index( i ), m, mode );
  }
  return over_input_space( sum, m );
}

rational er_from_quartet( const error_histogram& quartet, unsigned m )
{
  require_final( quartet, m );
  const u128 zero_distance = u128{quartet.matrix( carry_pair{0, 0} ).at( 0, 0 )} + quartet.matrix( carry_pair{1, 1} ).at( 0, 0 );
  return rational( 1 ) - over_input_space( to_big_int( zero_distance ), m );
}

rational msed_from_quartet( const error_histogram& quartet, unsigned m, sign_mode mode )
{
  require_final( quartet, m );
  u128 sum = 0;
  for ( unsigned i = 0; i < 4u; ++i )
  {
    const auto pair = carry_pair::from_index( i );
    const auto& mat = quartet.matrix( i );
    const i128 offset = static_cast<i128>( mu( mode ) ) * ( i128{1} << m ) *
                        ( static_cast<i128>( pair.exact ) - static_cast<i128>( pair.approx ) );
    for ( std::size_t d = 0; d < mat.rows(); ++d )
    {
      const auto dd = static_cast<i128>( d );
      const u128 up = abs128( offset + dd );
      const u128 down = abs128( offset - dd );
      sum += u128{mat.at( d, 0 )} * up * up + u128{mat.at( d, 1 )} * down * down;
    }
  }
  return over_input_space( to_big_int( sum ), m );
}

std::uint64_t iteration_bound( unsigned m, unsigned k )
{
  validate_geometry( m, m, k );
  return std::uint64_t{m / k} << ( 2u * k + 2u );
}

std::uint64_t trace_length( unsigned m, unsigned k )
{
  validate_geometry( m, m, k );
  return ( std::uint64_t{1} << ( 2u * k ) ) * ( 4u * ( m / k ) - 3u );
}

big_int to_big_int( unsigned __int128 value )
{
  big_int out = static_cast<std::uint64_t>( value >> 64 );
  out <<= 64;
  out += static_cast<std::uint64_t>( value );
  return out;
}

double to_double( const rational& value ) { return value.convert_to<double>(); }

void write_trace_header( std::ostream& out )
{
  out << "iteration,slot,carry_in,a,b,cout_e,sum_e,cout_a,sum_a,diff,matrix\n";
}

void write_trace_record( std::ostream& out, const trace_record& record, unsigned k )
{
  out << record.iteration << ',' << record.slot << ',' << pair_label( record.carry_in ) << ','
      << to_binary( record.a, k ) << ',' << to_binary( record.b, k ) << ',';
  if ( !record.touched )
  {
    out << "NA,NA,NA,NA,NA,NA\n";
    return;
  }
  out << record.exact->cout << ',' << to_binary( record.exact->sum, k ) << ',' << record.approx->cout << ','
      << to_binary( record.approx->sum, k ) << ',' << record.diff << ",HMAT" << pair_label( *record.touched ) << '\n';
}

trace_observer csv_trace_writer( std::ostream& out, unsigned k )
{
  write_trace_header( out );
  return [&out, k]( const trace_record& record, const error_histogram& ) { write_trace_record( out, record, k ); };
}

} // namespace medcal
