"""Shared fixtures: the bundled 3x6 example matrix and its golden
approximations (rounded to two decimals, the precision they are published
at; comparisons allow +-0.03 since the input itself is 2-dp rounded).
"""

import numpy as np
import pytest

X_EXAMPLE = np.array(
    [
        [0.09, 0.90, 0.62, 0.00, 0.00, 0.00],
        [0.85, 0.02, 0.47, 0.20, 0.75, 0.00],
        [0.00, 0.00, 0.00, 0.45, 0.70, 0.80],
    ]
)

X_EXAMPLE_FRO = 2.02
X_EXAMPLE_MEAN = np.array([0.27, 0.38, 0.33])

GOLDEN_PCA_RANK1 = np.array(
    [
        [0.28, 0.82, 0.61, 0.08, -0.10, -0.07],
        [0.38, 0.28, 0.32, 0.42, 0.45, 0.45],
        [0.32, -0.15, 0.03, 0.49, 0.68, 0.62],
    ]
)

GOLDEN_PCA_RANK2 = np.array(
    [
        [0.18, 0.87, 0.59, 0.10, -0.14, 0.01],
        [0.90, -0.00, 0.45, 0.27, 0.66, 0.01],
        [0.09, -0.03, -0.03, 0.56, 0.56, 0.81],
    ]
)

GOLDEN_SVD_RANK1 = np.array(
    [
        [0.21, 0.09, 0.17, 0.13, 0.30, 0.14],
        [0.51, 0.22, 0.42, 0.31, 0.74, 0.35],
        [0.38, 0.17, 0.31, 0.23, 0.55, 0.26],
    ]
)

GOLDEN_SVD_RANK2 = np.array(
    [
        [0.33, 0.70, 0.62, -0.07, 0.03, -0.23],
        [0.53, 0.28, 0.47, 0.30, 0.71, 0.31],
        [0.30, -0.25, 0.01, 0.37, 0.73, 0.51],
    ]
)

GOLDEN_NNCA_RANK1 = np.array(
    [
        [0.27, 0.22, 0.24, 0.16, 0.36, 0.20],
        [0.53, 0.43, 0.46, 0.32, 0.71, 0.40],
        [0.35, 0.29, 0.31, 0.21, 0.47, 0.27],
    ]
)

GOLDEN_NNCA_RANK2 = np.array(
    [
        [0.33, 0.59, 0.62, 0.00, 0.03, 0.00],
        [0.53, 0.44, 0.47, 0.32, 0.71, 0.40],
        [0.30, 0.00, 0.01, 0.34, 0.73, 0.43],
    ]
)

GOLDEN_NMF_RANK1 = np.array(
    [
        [0.21, 0.09, 0.17, 0.13, 0.30, 0.14],
        [0.51, 0.22, 0.42, 0.31, 0.73, 0.35],
        [0.38, 0.17, 0.32, 0.23, 0.55, 0.26],
    ]
)

#: 0-based positions printed as exact zeros in the golden rank-2 matrices.
NNCA_RANK2_ZEROS = ((0, 3), (0, 5), (2, 1))

#: Published repeated-study means (their acceptance bands in parentheses).
STUDY_MEANS = {
    ("pca", 1): 2.77,
    ("pca", 2): 3.32,
    ("svd", 2): 3.43,
    ("nnca_sparse", 2): 3.43,
    ("nmf_angle", 2): 3.80,
}

#: Published mean angles for the dimension-grid study, keyed by (n, d).
ANGLE_STUDY_MEANS = {
    (10, 10): 0.33369,
    (10, 100): 1.7112,
    (10, 1000): 2.8483,
    (10, 10000): 4.4283,
    (100, 10): 0.11527,
    (100, 100): 0.94675,
    (100, 1000): 3.3778,
    (100, 10000): 3.8638,
}


@pytest.fixture
def x_example():
    return X_EXAMPLE.copy()
