pub mod channel;
pub mod error;
pub mod nulling;
pub mod grouping;
pub mod pda;
pub mod delivery;
pub mod experiment;
