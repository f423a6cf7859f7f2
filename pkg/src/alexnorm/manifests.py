"""The canonical scenario manifest.

One entry per acceptance check of the library: norm exactness, translation-gap
convergence for the four canonical functions, the isometry draw, the slow-decay
construction, the bump oscillation bound, shifted-primitive estimates with the
integrable-but-not-absolutely witness, the three weight audits, the uniform
bound of variation-bounded families (and its violating family), and the two
Poisson boundary harnesses.
"""

import math


def canonical_manifest() -> dict:
    pi = math.pi
    dyadic = [2.0 ** -k for k in range(1, 11)]
    scenarios = [
        {
            "name": "c01_norm_indicator",
            "kind": "norm",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "thresholds": {"tol": 1e-12},
            "expected": 1.0,
            "output_path": "c01_norm_indicator.csv",
        },
        {
            "name": "c02_gap_indicator",
            "kind": "gap_sweep",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "ladder": dyadic,
            "thresholds": {"tol": 1e-9, "final_gap": 1e-2},
            "output_path": "c02_gap_indicator.csv",
        },
        {
            "name": "c02_gap_ramp",
            "kind": "gap_sweep",
            "function_spec": {"kind": "builtin", "name": "ramp"},
            "ladder": dyadic,
            "thresholds": {"tol": 1e-9, "final_gap": 1e-2},
            "output_path": "c02_gap_ramp.csv",
        },
        {
            "name": "c02_gap_sinc",
            "kind": "gap_sweep",
            "function_spec": {"kind": "builtin", "name": "sinc_primitive"},
            "ladder": dyadic,
            "thresholds": {"tol": 1e-9, "final_gap": 1e-2},
            "output_path": "c02_gap_sinc.csv",
        },
        {
            "name": "c02_gap_bump",
            "kind": "gap_sweep",
            "function_spec": {"kind": "builtin", "name": "bump"},
            "ladder": dyadic,
            "thresholds": {"tol": 1e-9, "final_gap": 1e-2},
            "output_path": "c02_gap_bump.csv",
        },
        {
            "name": "c03_isometry",
            "kind": "norm",
            "function_spec": {"kind": "builtin", "name": "step_signal"},
            "thresholds": {"tol": 1e-12},
            "check_isometry": True,
            "pairs": 100,
            "output_path": "c03_isometry.csv",
        },
        {
            "name": "c04_decay_sqrt",
            "kind": "decay",
            "thresholds": {"tol": 1e-12},
            "psi": {"name": "sqrt"},
            "n_max": 256,
            "output_path": "c04_decay_sqrt.csv",
        },
        {
            "name": "c05_osc_bump",
            "kind": "osc_bound",
            "ladder": [1e-2, 1e-3],
            "thresholds": {"tol": 1e-9},
            "output_path": "c05_osc_bump.csv",
        },
        {
            "name": "c06_primitive_gap_canonical",
            "kind": "primitive_gap",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "ladder": [0.5, 0.25, 0.1, 0.01],
            "thresholds": {"tol": 1e-9},
            "output_path": "c06_primitive_gap_canonical.csv",
        },
        {
            "name": "c06_primitive_gap_witness",
            "kind": "primitive_gap",
            "function_spec": {"kind": "builtin", "name": "sinc_primitive"},
            "ladder": [pi, 1.0, 0.5],
            "thresholds": {"tol": 1e-9},
            "l1": False,
            "witness_shift": pi,
            "output_path": "c06_primitive_gap_witness.csv",
        },
        {
            "name": "c07_weight_reciprocal_quadratic",
            "kind": "weight_audit",
            "weight_spec": {"kind": "builtin", "name": "reciprocal_quadratic"},
            "ladder": [0.5, 0.25, 0.1, 0.01],
            "thresholds": {"tol": 1e-9},
            "interval": [-10.0, 10.0],
            "eps": 0.1,
            "closed_form_check": {"xs": [0.5, 0.1], "interval": [-50.0, 50.0],
                                  "levels": 16, "rel_tol": 0.01},
            "output_path": "c07_weight_reciprocal_quadratic.csv",
        },
        {
            "name": "c07_weight_exponential",
            "kind": "weight_audit",
            "weight_spec": {"kind": "builtin", "name": "exponential"},
            "ladder": [0.5, 0.25, 0.1, 0.01],
            "thresholds": {"tol": 1e-9},
            "interval": [-3.0, 3.0],
            "eps": 0.1,
            "output_path": "c07_weight_exponential.csv",
        },
        {
            "name": "c07_weight_step",
            "kind": "weight_audit",
            "weight_spec": {"kind": "builtin", "name": "step_weight"},
            "ladder": [0.5, 0.25, 0.125, 0.0625],
            "thresholds": {"tol": 1e-9},
            "interval": [-1.0, 1.0],
            "eps": 0.1,
            "output_path": "c07_weight_step.csv",
        },
        {
            "name": "c07_weighted_sweep",
            "kind": "weighted_sweep",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "weight_spec": {"kind": "builtin", "name": "reciprocal_quadratic"},
            "ladder": [0.5, 0.25, 0.1, 0.01],
            "thresholds": {"tol": 1e-9, "final_gap": 0.05},
            "output_path": "c07_weighted_sweep.csv",
        },
        {
            "name": "c08_lemma_bounded",
            "kind": "lemma_check",
            "thresholds": {"tol": 1e-9},
            "family": "damped_sine",
            "ns": [1, 2, 4, 8, 16],
            "M": 8.0,
            "expect": "witnessed",
            "output_path": "c08_lemma_bounded.csv",
        },
        {
            "name": "c08_lemma_violation",
            "kind": "lemma_check",
            "thresholds": {"tol": 1e-9},
            "family": "spike",
            "ns": [1, 2, 8, 64],
            "M": 8.0,
            "expect": "violated",
            "output_path": "c08_lemma_violation.csv",
        },
        {
            "name": "c09_poisson_disc",
            "kind": "poisson_disc",
            "function_spec": {"kind": "indicator", "a": 0.0, "b": pi},
            "ladder": [0.9, 0.99, 0.999],
            "thresholds": {"tol": 1e-9, "final_gap": 0.05},
            "cos_check": True,
            "output_path": "c09_poisson_disc.csv",
        },
        {
            "name": "c10_poisson_halfplane",
            "kind": "poisson_halfplane",
            "function_spec": {"kind": "builtin", "name": "indicator_01"},
            "weight_spec": {"kind": "builtin", "name": "reciprocal_quadratic"},
            "ladder": [1.0, 0.1, 0.01],
            "thresholds": {"tol": 1e-6, "final_gap": 0.02},
            "interval": [-8.0, 8.0],
            "unit_check": True,
            "output_path": "c10_poisson_halfplane.csv",
        },
    ]
    return {
        "seed": 20260808,
        "versions": "canonical-1",
        "timestamp": "2026-08-08T00:00:00Z",
        "scenarios": scenarios,
    }
