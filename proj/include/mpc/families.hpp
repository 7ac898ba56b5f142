#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mpc/query_model.hpp"

namespace mpc {

// The standard query families used by the reference tables and tests.

// L_k: S_1(x0,x1), ..., S_k(x_{k-1},x_k)
Query make_path_query(std::size_t k);

// C_k: S_1(x1,x2), ..., S_k(xk,x1)
Query make_cycle_query(std::size_t k);

// T_k: S_1(z,x1), ..., S_k(z,xk)
Query make_star_query(std::size_t k);

// B_{k,m}: one atom per m-subset of {x1..xk}
Query make_binom_query(std::size_t k, std::size_t m);

// SP_k: R_i(z,x_i), S_i(x_i,y_i) for i = 1..k
Query make_spider_query(std::size_t k);

// Parses compact family names such as "L_16", "C3", "T_4", "B_4_2", "SP3".
std::optional<Query> family_query(const std::string& name);

}  // namespace mpc
