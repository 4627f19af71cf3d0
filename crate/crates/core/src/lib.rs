//! Multiple Dirichlet series attached to twisted multiplicative coefficient
//! tables over `F_q[T]`, together with their scattering-matrix functional
//! equations, the Weyl groupoids those equations generate, and the Nichols
//! algebra cohomology that the groupoids are matched against.

pub mod exactnum;
pub mod ffield;
pub mod polyring;
pub mod mdcoeff;
pub mod feq;
pub mod linalg;
pub mod groupoid;
pub mod nichols;
pub mod cli;
