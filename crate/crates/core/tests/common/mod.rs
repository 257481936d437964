#![allow(dead_code)]

pub mod d3;
