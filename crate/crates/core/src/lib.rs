pub mod affine;
pub mod cancellative;
pub mod category;
pub mod cli;
pub mod esn;
pub mod groupoid;
pub mod io;
pub mod iso;
pub mod mcalister;
pub mod semigroup;
pub mod util;
