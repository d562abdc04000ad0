#pragma once

#include <string>
#include <vector>

#include "sgl/harmonics.hpp"
#include "sgl/kernel.hpp"

namespace sgl {

// SGL1 dataset container: magic "SGL1", u32 version=1, u32 N, u32 M,
// i32 is_real, u32 radial counts for m=-M..M, then N*D complex entries as
// little-endian f64 (re, im) pairs, row-major in layout order.
void save_sgl1(const std::string& path, const SteerableDataset& ds);
SteerableDataset load_sgl1(const std::string& path);

// Dataset CSV: header "i,m,ell,re,im", one line per layout entry, 0-based
// radial indices, full precision.
void save_dataset_csv(const std::string& path, const SteerableDataset& ds);
SteerableDataset load_dataset_csv(const std::string& path);

// SGA1 affinity dump: magic "SGA1", u32 version=1, u32 N, u32 M, f64 epsilon,
// u32 K, u8 debias, u8 density_normalized, u8 has_threshold, f64 threshold,
// degrees, pre-normalization degrees (zeros when unused), then the blocks in
// m-major row-major complex f64.
void save_sga1(const std::string& path, const FourierAffinity& fa);
FourierAffinity load_sga1(const std::string& path);

// SGB1 harmonic basis: magic "SGB1", u32 version=1, u32 N, u32 M,
// u8 normalized, u8 has_vectors, degrees, then per m the eigenvalues and
// (when present) the eigenvector matrix in row-major complex f64.
void save_basis(const std::string& path, const HarmonicBasis& basis);
HarmonicBasis load_basis(const std::string& path);

// Spectrum CSV: header "m,k,lambda", 1-based k.
void save_spectrum_csv(const std::string& path, const std::vector<SpectrumEntry>& spectrum);

}  // namespace sgl
