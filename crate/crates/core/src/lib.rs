pub mod beb;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod normal_form;
pub mod sliding;
pub mod smallmat;

pub use error::{Error, Result};
pub use model::{NormalFormParams, PwlSystem};
