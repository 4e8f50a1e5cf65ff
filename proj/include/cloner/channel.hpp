#pragma once

#include "cloner/states.hpp"

// The cloning protocol: phase-randomized displacement ring, tap to a
// photon-number-resolving detector, heralding on counts >= M, symmetric
// split into clones. Two backends: the exact coherent-ensemble path and a
// brute-force truncated-Fock oracle with explicit beamsplitter unitaries.
//
// Threshold semantics: a pulse is accepted when the detected count is >= M;
// M = 0 means no conditioning (always accept).

namespace cloner {

struct DetectorModel {
    double efficiency = 1.0;  // η_PNRD
    double dark_mean = 0.0;   // expected dark counts per gate

    void validate() const;
};

struct ClonerConfig {
    Complex alpha;                 // input coherent amplitude
    double x = 0.0;                // displacement-to-amplitude ratio
    int threshold = 0;             // M
    double tap_reflectivity = 0.0; // R, fraction of power sent to the detector
    DetectorModel detector;
    int n_clones = 2;
    int ring_points = 64;          // K

    void validate() const;
};

struct HeraldedOutput {
    // Post-herald mixture on the amplified mode, amplitudes √(1−R)·γ.
    CoherentEnsemble post_herald;
    // Per-clone amplitude scale √((1−R)/c) relative to the pre-tap γ.
    double clone_scale;
    double success_probability;
    // False for the exact-subtraction limit, where a success probability
    // is not defined.
    bool success_applicable = true;
    ClonerConfig config;

    // Mixture seen by each clone (amplitudes clone_scale·γ).
    CoherentEnsemble clone_ensemble() const;
    // Amplified mode with the tap transmission divided out (amplitudes γ).
    CoherentEnsemble pre_tap_ensemble() const;
};

// Displacement ring: members γ_j = α + x|α| e^{2πij/K}, uniform weights.
CoherentEnsemble ring_ensemble(Complex alpha, double x, int ring_points);

// P(N >= m) for N ~ Poisson(mean), numerically stable for large means.
double poisson_tail(double mean, int m);

// Acceptance probability for ring member γ: the tapped, detected light is
// Poissonian with mean η·R·|γ|² + dark.
double herald_weight(Complex gamma, const ClonerConfig& cfg);

// Full protocol on the ensemble backend.
HeraldedOutput apply_cloner(const ClonerConfig& cfg);

// Idealized m-photon subtraction: weights ∝ |γ|^{2m}. The R→0 oracle for
// apply_cloner at M = 1 (coherent states are eigenstates of â).
HeraldedOutput exact_subtraction_cloner(const ClonerConfig& cfg, int m);

struct FockOracleResult {
    DensityMatrix clone;        // single clone, dim × dim
    DensityMatrix joint;        // two clones, dim² × dim²
    double success_probability;
};

// Brute-force backend: ring mixture assembled with explicit displacement
// matrices, beamsplitter unitaries on tensored Fock spaces, binomial loss
// on the tap mode, projection onto tap counts >= M.
FockOracleResult fock_oracle_cloner(const ClonerConfig& cfg, int dim);

// tr_B / tr_A over a dim×dim ⊗ dim×dim space (index = a*dim + b).
DensityMatrix partial_trace_second(const DensityMatrix& joint, int dim);
DensityMatrix partial_trace_first(const DensityMatrix& joint, int dim);

}  // namespace cloner
