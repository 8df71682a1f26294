"""Edelstein's fixed-point-free affine isometry of the sequence space, with
certified orbit norms, suborbit index sequences and the Douglas-Rachford view."""

from edelstein.certified import CertifiedValue
from edelstein.indices import (
    FractionalPart,
    decimal_digits,
    edelstein_index,
    factorial,
    fractional_part,
    printed_s_index,
    s_index,
)
from edelstein.operator import (
    EdelsteinIsometry,
    Ell2Vector,
    algebraic_fixed_point_norm_sq,
    apply_lifted,
    iterate_lifted,
    orbit_norm_sq,
    translation_norm_sq,
)
from edelstein.plane import (
    AffineRotation,
    PlanePoint,
    RotationParams,
    apply_R,
    fixed_point,
    iterate_norm_sq_bounds,
    iterate_R,
    orbit_norm_sq_zero,
    rotation_matrix_apply,
)
from edelstein.schedules import XiSchedule
from edelstein.splitting import (
    AffineLine,
    AveragedRotation,
    DouglasRachford,
    MonotoneKind,
    MonotoneValue,
    apply_DR,
    apply_M,
    apply_T,
    iterate_T,
    product_domain_check,
    project_line,
    verify_monotone_equality,
)
from edelstein.theorems import (
    BoundCertificate,
    rate_table,
    verify_blowup_edelstein,
    verify_blowup_suborbit,
    verify_fractional_window,
    verify_vanishing_suborbit,
)

__version__ = "0.1.0"
