//! Floating-point scalar abstraction for the numerical kernels.

/// Scalar type the low-level kernels and quadrature are generic over: f32 or f64.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + core::fmt::Debug + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lift an f64 literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("literal not representable")
}
