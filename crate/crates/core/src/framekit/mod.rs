//! Moving frames along curves: Frenet apparatus of a space curve, Darboux
//! apparatus of a curve on a surface, and the rotation between them.

mod darboux;
mod frenet;

pub use darboux::{
    darboux_direct, darboux_from_host, darboux_residuals, darboux_residuals_fd, frenet_to_darboux,
    frenet_to_darboux_jet, DarbouxApparatus, DarbouxFields, DarbouxSource, DirectFrameDef, HostSurfaceDef,
    NormalConvention, RotatedFrenetDef,
};
pub use frenet::{
    check_unit_speed, frame_defect, frenet_at, frenet_fields, frenet_residuals, frenet_residuals_fd, FrenetApparatus,
    FrenetFields, UnitSpeedReport,
};
