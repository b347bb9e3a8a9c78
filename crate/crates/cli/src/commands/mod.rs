mod audit;
mod couple;
mod raster;
mod simulate;
mod sweep;

pub use audit::audit;
pub use couple::couple;
pub use raster::raster;
pub use simulate::simulate;
pub use sweep::sweep;

/// Whether the checks a command performs passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}
