pub mod cn;
