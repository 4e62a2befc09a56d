//! Analytic Fourier data of test functions and boundary geometry.

mod bessel;
mod ellipse;
mod provider;

pub use bessel::{bessel_j1, bessel_j1_over_x};
pub use ellipse::{
    boundary_distance, boundary_points, disc_ft, dyadic_squares, ellipse_ft,
    periodic_boundary_distance, BoundaryPoint, DyadicPartition, EllipseRegion,
};
pub use provider::{fourier_coefficient, FourierProvider, FourierTable};
