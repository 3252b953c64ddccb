#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medcal
{

/*! \brief Raised when an adder description violates a structural invariant. */
class config_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Raised by the `.tt` reader; carries the 1-based offending line. */
class parse_error : public config_error
{
public:
  parse_error( std::size_t line, const std::string& detail, const std::string& source = {} )
      : config_error( ( source.empty() ? "line " : source + ":" ) + std::to_string( line ) + ": " + detail ),
        line_( line ),
        detail_( detail )
  {
  }

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::string detail_;
};

/*! \brief A violated internal precondition (engine bug, never user error). */
class internal_fault : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

} // namespace medcal
