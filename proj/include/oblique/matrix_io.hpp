#pragma once

#include <iosfwd>
#include <string>

#include "oblique/mdp.hpp"
#include "oblique/types.hpp"

namespace oblique {

// Plain-text formats. Tokens are whitespace-delimited; line layout is free
// and '#' starts a comment that runs to the end of the line.
//
// Matrix:
//   <rows> <cols>
//   <rows*cols values, row-major>
//
// Tabular MDP:
//   <n_states> <n_actions> <gamma>
//   <n_states*n_actions rows of n_states values: P(.|s,a), s-major then a>
//   <n_states rows of n_actions values: R(s,a)>

Matrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const Matrix& m);

TabularMDP read_mdp(std::istream& in);
void write_mdp(std::ostream& out, const TabularMDP& mdp);

/// File wrappers; failures to open raise IoError naming the path, malformed
/// content raises ConfigError.
Matrix load_matrix(const std::string& path);
TabularMDP load_mdp(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);
void save_mdp(const std::string& path, const TabularMDP& mdp);

/// Shortest decimal text that parses back to exactly `value` ("inf"/"nan"
/// for non-finite values).
std::string format_double(double value);

}  // namespace oblique
