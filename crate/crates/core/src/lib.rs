//! Rewriting up to deformation by invertibles, Garside germs, and greedy
//! normal forms for braid, Coxeter, Klein bottle and free abelian monoids.

pub mod cli;
pub mod coxeter;
pub mod garside_zoo;
pub mod germ;
pub mod paths;
pub mod presentation;
pub mod rewrite;
