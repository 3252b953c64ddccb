#include <medcal/cli.hpp>

#include <iostream>

int main( int argc, char** argv )
{
  return medcal::run_cli( std::vector<std::string>( argv, argv + argc ), std::cout, std::cerr );
}
