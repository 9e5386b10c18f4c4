pub mod fpgroup;
pub mod padic;
pub mod permgroup;
pub mod pquotient;
pub mod predictor;
pub mod snf;
pub mod verifier;
