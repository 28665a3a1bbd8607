#ifndef SNP_SNP_HPP
#define SNP_SNP_HPP

#include "snp/unary_regex.hpp"
#include "snp/int_matrix.hpp"
#include "snp/linalg.hpp"
#include "snp/system.hpp"
#include "snp/matrices.hpp"
#include "snp/engine.hpp"
#include "snp/reachability.hpp"
#include "snp/json_io.hpp"
#include "snp/cli.hpp"

#endif // SNP_SNP_HPP
