//! Projective deformations of hyperbolic Coxeter 3-orbifolds relative to
//! their mirrors.

pub mod andreev;
pub mod groebner;
pub mod hyperbolic;
pub mod linalg;
pub mod localdim;
pub mod pipeline;
pub mod polytope;
pub mod real;
pub mod rigidity;
pub mod tangent;
pub mod vinberg;
