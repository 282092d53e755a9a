pub mod z4_model;
