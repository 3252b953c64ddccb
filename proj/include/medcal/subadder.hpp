#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace medcal
{

/*! \brief Output of one adder cell or chain: carry-out bit and sum word. */
struct add_result
{
  std::uint32_t cout{0};
  std::uint64_t sum{0};

  friend bool operator==( const add_result&, const add_result& ) = default;
};

/*! \brief Row output of a sub-adder truth table. */
struct table_row
{
  std::uint32_t sum{0};
  std::uint8_t cout{0};

  friend bool operator==( const table_row&, const table_row& ) = default;
};

/*! \brief Largest sub-adder width accepted (2^(2k+1) rows are stored). */
inline constexpr unsigned max_subadder_width = 12u;

/*! \brief Complete truth table of a k-bit sub-adder.
 *
 * Maps every (cin, a, b) with a, b < 2^k onto (cout, sum).  Rows are stored
 * in ascending (cin, a, b) order, i.e. at index `(cin << 2k) | (a << k) | b`.
 * Instances are always valid: the constructor rejects tables that miss rows
 * or carry out-of-range outputs.
 */
class subadder_table
{
public:
  subadder_table( unsigned width, std::vector<table_row> rows );

  unsigned width() const noexcept { return width_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  const std::vector<table_row>& rows() const noexcept { return rows_; }

  /*! \brief Row lookup; `a` and `b` must be below 2^k. */
  add_result evaluate( std::uint32_t cin, std::uint32_t a, std::uint32_t b ) const
  {
    const auto& row = rows_[row_index( cin, a, b )];
    return {row.cout, row.sum};
  }

  std::size_t row_index( std::uint32_t cin, std::uint32_t a, std::uint32_t b ) const noexcept
  {
    return ( static_cast<std::size_t>( cin ) << ( 2u * width_ ) ) | ( static_cast<std::size_t>( a ) << width_ ) | b;
  }

  /*! \brief True if `cout * 2^k + sum == a + b + cin` for every row. */
  bool is_exact() const;

  friend bool operator==( const subadder_table&, const subadder_table& ) = default;

private:
  unsigned width_;
  std::vector<table_row> rows_;
};

/*! \brief Throws `config_error` unless `rows` forms a complete k-bit table. */
void validate_table( unsigned width, const std::vector<table_row>& rows );

subadder_table exact_table( unsigned width );

/*! \brief Table whose rows are drawn uniformly from the 2^(k+1) outputs.
 *
 * Bits are taken straight from a `std::mt19937_64` seeded with `seed`, one
 * draw per row in ascending (cin, a, b) order, so tables are reproducible
 * across platforms and standard libraries.
 */
subadder_table random_table( unsigned width, std::uint64_t seed );

/*! \brief Reads a table in `.tt` format; throws `parse_error`. */
subadder_table parse_table( std::istream& in );
subadder_table parse_table_string( std::string_view text );
subadder_table load_table( const std::string& path );

/*! \brief Writes `k=<k>` followed by all rows in ascending (cin, a, b) order. */
void serialize_table( const subadder_table& table, std::ostream& out );
std::string serialize_table( const subadder_table& table );

/*! \brief Binary rendering, most significant bit first, padded to `width`. */
std::string to_binary( std::uint64_t value, unsigned width );

/*! \brief Sign interpretation of the carry-out term. */
enum class sign_mode : int
{
  unsigned_mode = 1,
  signed_mode = -1
};

inline int mu( sign_mode mode ) noexcept { return static_cast<int>( mode ); }

/*! \brief Largest approximated width the dense histograms are allowed to reach. */
inline constexpr unsigned max_approx_bits = 28u;

/*! \brief An n-bit adder whose lower m bits are a chain of k-bit sub-adders.
 *
 * Slot 0 is the least significant sub-adder.  Each slot may carry its own
 * table, all of the same width k.
 */
class adder_config
{
public:
  adder_config( unsigned n, unsigned m, unsigned k, std::vector<subadder_table> slots,
                sign_mode mode = sign_mode::unsigned_mode, std::uint32_t initial_carry = 0u );

  unsigned n() const noexcept { return n_; }
  unsigned m() const noexcept { return m_; }
  unsigned k() const noexcept { return k_; }
  unsigned num_slots() const noexcept { return static_cast<unsigned>( slots_.size() ); }
  const std::vector<subadder_table>& slots() const noexcept { return slots_; }
  const subadder_table& slot( unsigned i ) const { return slots_.at( i ); }
  sign_mode mode() const noexcept { return mode_; }
  std::uint32_t initial_carry() const noexcept { return initial_carry_; }

  friend bool operator==( const adder_config&, const adder_config& ) = default;

private:
  unsigned n_, m_, k_;
  std::vector<subadder_table> slots_;
  sign_mode mode_;
  std::uint32_t initial_carry_;
};

/*! \brief Throws `config_error` for invalid (n, m, k) geometry. */
void validate_geometry( unsigned n, unsigned m, unsigned k );

/*! \brief Ripples A and B (both below 2^m) through all slots. */
add_result approx_add( const adder_config& config, std::uint64_t a, std::uint64_t b );

/*! \brief Accurate m-bit addition with the configured initial carry. */
add_result exact_add( const adder_config& config, std::uint64_t a, std::uint64_t b );

adder_config uniform_config( unsigned m, const subadder_table& table, unsigned n = 0u,
                             sign_mode mode = sign_mode::unsigned_mode, std::uint32_t initial_carry = 0u );
adder_config exact_config( unsigned m, unsigned k, unsigned n = 0u );

/*! \brief The 2-bit worked example: half-adder LSB cell plus approximate MSB cell.
 *
 * The LSB cell has no carry input, so its cin=1 rows hold exact full-adder
 * outputs; they are unreachable with a zero initial carry.
 */
adder_config worked_example_config();
subadder_table worked_example_lsb_table();
subadder_table worked_example_msb_table();

/*! \brief SplitMix64 finalizer over `seed + index`, used to derive independent sub-seeds. */
std::uint64_t derive_seed( std::uint64_t seed, std::uint64_t index ) noexcept;

/*! \brief Random per-slot configuration; slot i uses `random_table(k, derive_seed(seed, i))`. */
adder_config random_config( unsigned m, unsigned k, std::uint64_t seed, unsigned n = 0u );

} // namespace medcal
