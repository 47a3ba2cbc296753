pub mod bounds;
pub mod certify;
pub mod error;
pub mod geom;
pub mod gf;
pub mod optimize;
pub mod scid;
pub mod search;

pub use error::{Error, Result};
