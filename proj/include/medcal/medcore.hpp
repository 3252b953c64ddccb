#pragma once

#include <medcal/subadder.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace medcal
{

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

/*! \brief Joint (exact, approximate) carry state; index is `2 * exact + approx`. */
struct carry_pair
{
  std::uint32_t exact{0};
  std::uint32_t approx{0};

  constexpr unsigned index() const noexcept { return 2u * exact + approx; }
  static constexpr carry_pair from_index( unsigned i ) noexcept { return {i >> 1u, i & 1u}; }

  friend bool operator==( const carry_pair&, const carry_pair& ) = default;
};

/*! \brief Two-column count matrix.
 *
 * Row `d` holds how many input combinations end with signed sum difference
 * `+d` (column 0) or `-d` (column 1).  Column 1 of row 0 stays empty.
 * Individual counts never exceed 2^(2m) <= 2^56, so 64-bit cells suffice;
 * all products and sums derived from them are formed in 128 bits.
 */
class count_matrix
{
public:
  count_matrix() = default;
  explicit count_matrix( std::size_t rows ) : rows_( rows ), cells_( 2u * rows, 0u ) {}

  std::size_t rows() const noexcept { return rows_; }

  std::uint64_t at( std::size_t row, unsigned col ) const { return cells_[2u * row + col]; }
  std::uint64_t& at( std::size_t row, unsigned col ) { return cells_[2u * row + col]; }

  std::span<const std::uint64_t> cells() const noexcept { return cells_; }
  std::span<std::uint64_t> cells() noexcept { return cells_; }

  bool is_zero() const noexcept;
  unsigned __int128 total() const noexcept;

  friend bool operator==( const count_matrix&, const count_matrix& ) = default;

private:
  std::size_t rows_{0};
  std::vector<std::uint64_t> cells_;
};

/*! \brief The quartet of count matrices, one per carry pair, after `bits_processed` LSBs. */
class error_histogram
{
public:
  explicit error_histogram( unsigned bits_processed = 0u );

  unsigned bits_processed() const noexcept { return bits_; }
  std::size_t rows() const noexcept { return std::size_t{1} << bits_; }

  const count_matrix& matrix( carry_pair pair ) const { return mats_[pair.index()]; }
  count_matrix& matrix( carry_pair pair ) { return mats_[pair.index()]; }
  const count_matrix& matrix( unsigned index ) const { return mats_.at( index ); }
  count_matrix& matrix( unsigned index ) { return mats_.at( index ); }

  unsigned __int128 total() const noexcept;

  friend bool operator==( const error_histogram&, const error_histogram& ) = default;

private:
  unsigned bits_;
  std::array<count_matrix, 4> mats_;
};

/*! \brief Counters describing how much work a run performed. */
struct work_counters
{
  /// (input pair, carry pair) visits, including skipped all-zero inputs after slot 0
  std::uint64_t iterations{0};
  /// LMAT rows copied into HMAT
  std::uint64_t row_copies{0};
};

/*! \brief One step of the slot loop, mirroring a line of the worked-example trace. */
struct trace_record
{
  std::uint64_t iteration{0};
  unsigned slot{0};
  carry_pair carry_in{};
  std::uint32_t a{0};
  std::uint32_t b{0};
  /// empty when the input matrix was all zero and the step was skipped
  std::optional<add_result> exact;
  std::optional<add_result> approx;
  std::int64_t diff{0};
  std::optional<carry_pair> touched;
};

/*! \brief Called after every step with the record and the output quartet as it stands. */
using trace_observer = std::function<void( const trace_record&, const error_histogram& )>;

struct med_report
{
  rational med;
  std::array<big_int, 4> ed_tot;
  rational er;
  rational msed;
  std::uint64_t iteration_count{0};
  std::uint64_t row_copies{0};
  std::uint64_t iteration_bound{0};
  std::chrono::nanoseconds wall_time{0};
};

struct med_result
{
  error_histogram quartet;
  med_report report;
};

/*! \brief Starting quartet: a single zero-difference count in the initial carry pair. */
error_histogram init_histogram( std::uint32_t initial_carry = 0u );

/*! \brief Weighted difference of two k-bit sum slices at bit position `p`. */
std::int64_t compute_diff( std::uint64_t sum_exact, std::uint64_t sum_approx, unsigned p );

/*! \brief Adds every count of `lmat` into `hmat` after shifting its difference by `diff`.
 *
 * Requires `hmat` to hold at least `|diff| + lmat.rows()` rows and, for
 * nonzero `diff`, `|diff| >= lmat.rows()` so that no difference changes
 * sign.  Throws `internal_fault` otherwise.  Returns the number of rows
 * copied.
 */
std::uint64_t map_and_accumulate( const count_matrix& lmat, count_matrix& hmat, std::int64_t diff );

/*! \brief Folds slot `slot` of `config` into `input`, which must have processed `slot * k` bits. */
error_histogram run_slot( const adder_config& config, unsigned slot, const error_histogram& input,
                          work_counters& counters, const trace_observer& observer = {} );

/*! \brief Exact MED of `config` by histogram propagation over all slots. */
med_result med_cal( const adder_config& config, const trace_observer& observer = {} );

/*! \brief Cumulative error distance of one final matrix. */
big_int finalize_ed( const count_matrix& matrix, carry_pair cout, unsigned m, sign_mode mode );

rational med_from_quartet( const error_histogram& quartet, unsigned m, sign_mode mode );
rational er_from_quartet( const error_histogram& quartet, unsigned m );
rational msed_from_quartet( const error_histogram& quartet, unsigned m, sign_mode mode );

/*! \brief Loop-count bound `(m/k) * 2^(2k+2)`. */
std::uint64_t iteration_bound( unsigned m, unsigned k );

/*! \brief Visits made with a fixed initial carry: `2^(2k) * (4m/k - 3)`. */
std::uint64_t trace_length( unsigned m, unsigned k );

big_int to_big_int( unsigned __int128 value );

/*! \brief Decimal rendering of a rational with up to 17 significant digits. */
double to_double( const rational& value );

/*! \brief Writes the trace CSV header. */
void write_trace_header( std::ostream& out );
void write_trace_record( std::ostream& out, const trace_record& record, unsigned k );

/*! \brief Observer that streams trace records as CSV rows (header written on construction). */
trace_observer csv_trace_writer( std::ostream& out, unsigned k );

} // namespace medcal
