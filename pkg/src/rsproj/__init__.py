"""Random-subspace dimensionality reduction with data-dependent
norm-preservation guarantees, comparison projections, and an
experiment harness."""

from .bounds import (
    BoundResult,
    EpsilonResult,
    achievable_epsilon,
    dot_product_band,
    required_k_basic,
    required_k_serfling,
)
from .densify import (
    DensifiedMatrix,
    densified_regularity,
    densify_dataset,
    householder_apply_binary,
    householder_apply_dense,
)
from .matrixio import (
    DenseMatrix,
    GrayImage,
    ParseError,
    SparseBinaryMatrix,
    load_dense_csv,
    load_pgm,
    load_sparse_binary,
    sample_image_windows,
    write_dense_csv,
)
from .projections import (
    IndexSubset,
    ProjectionOperator,
    apply_operator,
    gaussian_rp_matrix,
    pca_operator,
    rs_operator,
    rs_project,
    rs_sample_indices,
    sparse_rp_matrix,
)
from .regularity import (
    RegularityReport,
    UndefinedRegularityError,
    regularity_of_dataset,
    regularity_of_vector,
)
from .seeding import child_rng

__version__ = "0.1.0"
