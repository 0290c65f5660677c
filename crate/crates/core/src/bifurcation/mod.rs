//! Saddle-node, Hopf and Bogdanov-Takens loci and the `(Q, C)` bifurcation diagram.

pub mod bt;
pub mod diagram;
pub mod hopf;
pub mod saddle_node;

pub use bt::{bt_point, BtData};
pub use diagram::{trace_diagram, trace_diagram_with, BifDiagram, DiagramOptions, DiagramRegion};
pub use hopf::{
    bautin_point, hopf_curve_uv, hopf_d, hopf_m, hopf_matrix, hopf_t, l1_polynomial, lyapunov_l1, psi_map,
    HopfData, L1Sign, UvGrid,
};
pub use saddle_node::{saddle_node_q, sotomayor_check, SotomayorCheck};
