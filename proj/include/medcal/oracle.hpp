#pragma once

#include <medcal/medcore.hpp>
#include <medcal/subadder.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace medcal
{

/*! \brief Exact error metrics as reduced rationals. */
struct exact_metrics
{
  rational med;
  rational er;
  rational msed;

  friend bool operator==( const exact_metrics&, const exact_metrics& ) = default;
};

/*! \brief Largest m accepted by the exhaustive enumeration (2^(2m) pairs). */
inline constexpr unsigned max_exhaustive_bits = 14u;

/*! \brief Error distance of one operand pair.
 *
 * Both results are read as `mu * 2^m * cout + sum`; for unsigned adders
 * this is the plain absolute difference of the two (m+1)-bit sums.
 */
std::uint64_t error_distance( const adder_config& config, std::uint64_t a, std::uint64_t b );

/*! \brief MED, ER and MSED by enumerating every pair of m-bit operands. */
exact_metrics exhaustive_metrics( const adder_config& config );

/*! \brief Monte Carlo estimate, or distribution summary over repeated trials. */
struct mc_stats
{
  std::uint64_t sample_count{0};
  unsigned trials{1};
  /// samples covered the whole input space, so the estimate is exact
  bool exhaustive{false};
  double estimate{0.0};
  std::optional<double> abs_error;
  double err_min{0.0};
  double err_q1{0.0};
  double err_median{0.0};
  double err_q3{0.0};
  double err_max{0.0};
};

/*! \brief Mean ED over `samples` uniform operand pairs drawn with replacement.
 *
 * Operands are the low m bits of successive `std::mt19937_64` draws.  When
 * `samples >= 2^(2m)` the whole input space is enumerated instead and the
 * estimate is exact.  If `exact_med` is given, `abs_error` is filled in.
 */
mc_stats mc_estimate( const adder_config& config, std::uint64_t samples, std::uint64_t seed,
                      std::optional<double> exact_med = std::nullopt );

/*! \brief Absolute MC error over `trials` runs seeded `seed + t`, against the exact MED from `med_cal`. */
mc_stats mc_error_distribution( const adder_config& config, std::uint64_t samples, unsigned trials,
                                std::uint64_t seed );

/*! \brief Five-number summary with linearly interpolated quartiles. */
struct five_numbers
{
  double min{0.0};
  double q1{0.0};
  double median{0.0};
  double q3{0.0};
  double max{0.0};
};

five_numbers summarize( std::vector<double> values );

} // namespace medcal
