#ifndef COPOL_ORACLE_HPP
#define COPOL_ORACLE_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "copol/column_type.hpp"
#include "copol/lattice.hpp"

namespace copol::oracle {

using BigInt = boost::multiprecision::cpp_int;

struct Budget {
    long long max_steps = 24;  // cap on uL (and on n for full partition sums)
};

// (u,l) in H_L resolved to integer step data: S = uL total steps,
// D = lL net vertical displacement, V = S - L vertical steps.
struct HLPoint {
    int L = 1;
    long long S = 1;
    long long D = 0;
    long long vertical() const { return S - L; }
};

// validates membership in H_L (throws DomainError)
HLPoint make_hl(int L, double u, double l);

// natural log of an exact count
double log_big(const BigInt& n);

BigInt binom(long long n, long long k);

// |W_L(u,l)| by exhaustive dynamic programming over the step lattice
BigInt enumerate_column_paths(int L, double u, double l, const Budget& budget = {});

// |W_L(u,l)| by the vertical-stretch decomposition (slots x signed
// compositions), including the r=0 term
BigInt count_paths_stretch_form(int L, double u, double l);

// Hamiltonian of a concrete path in the block field (interaction already in
// the subtracted form: B-blocks charge beta on B-monomers and -alpha on
// A-monomers)
double hamiltonian(const DirectedPath& path, const DisorderPair& dis,
                   const ModelParams& params, int L);

// exact |W_{n,M}| with the per-column vertical cap
BigInt finite_path_count(long long n, int L_n, int M, const Budget& budget = {});

// (1/n) log Z over W_{n,M} for fixed disorder
double finite_free_energy(long long n, int L_n, const DisorderPair& dis,
                          const ModelParams& params, const Budget& budget = {});

// exact number of column-crossing trajectories for a type
BigInt count_column_paths(const ColumnType& th, double u, int L, const Budget& budget = {});

// log Z_L^omega(Theta,u) for a fixed microscopic word
double column_log_partition(const ColumnType& th, double u, int L,
                            const std::vector<Label>& omega, const ModelParams& params,
                            const Budget& budget = {});

struct MCStat {
    double mean = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
};

// Monte Carlo over fresh omega of (1/uL) log Z_L^omega(Theta,u)
MCStat column_free_energy_finite(const ColumnType& th, double u, int L, int omega_samples,
                                 std::uint64_t seed, const ModelParams& params,
                                 const Budget& budget = {});

} // namespace copol::oracle

#endif
