"""Robust harmonic retrieval with L1-norm Tucker decompositions of complex tensors."""
from .harmonic import (DETECTORS, METHODS, GroundTruth, HrScenario, RecoveryResult, detect,
                       esprit_recover, recover, recover_symbols, run_pipeline, scsm_recover,
                       scsm_scores, synthesize, vandermonde)
from .robust_pca import csgn, frob_norm, l1_norm, l1pca, nuclear_norm, svd_pca, unt
from .simkit import SweepConfig, crlb, rmse, run_sweep
from .tensor import (build_fs_hankel, core, fold, kron_others, kronecker, mode_product,
                     reconstruct, unfold)
from .tucker import TuckerConfig, TuckerFactors, hooi, hosvd, l1tooi, l1totd

__version__ = "0.1.0"
