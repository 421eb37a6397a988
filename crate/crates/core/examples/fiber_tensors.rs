//! Second moments of the angular central Gaussian fiber distribution and
//! the resulting cell diffusion tensors.
//!
//! cargo run --example fiber_tensors

use nalgebra::Matrix3;
use seedsim::fiber::{
    acg_moment, build_tensors, d2_over_d1, principal_angle, restrict_2d, table1_moment,
    OrientationMatrix,
};
use seedsim::model::ParameterSet;

fn main() -> seedsim::Result<()> {
    let p = ParameterSet::table1();

    for diag in [[1.0, 1.0, 1.0], [4.0, 1.0, 1.0], [10.0, 3.0, 0.5]] {
        let m = acg_moment(&OrientationMatrix::diagonal(diag)?)?;
        println!(
            "A = diag{diag:?}: M diagonal = [{:.6}, {:.6}, {:.6}], trace = {:.12}",
            m[(0, 0)],
            m[(1, 1)],
            m[(2, 2)],
            m.trace()
        );
    }

    // A general (rotated) A goes through its eigenbasis.
    let a = OrientationMatrix::new(Matrix3::new(3.0, 1.0, 0.0, 1.0, 2.0, 0.5, 0.0, 0.5, 1.0))?;
    println!("rotated A: M ={}", acg_moment(&a)?);

    let t = build_tensors(&table1_moment(), &p);
    println!("published D1 [um^2/h] ={}", t.d1);
    println!("D2 / D1 = {}", d2_over_d1(&p));
    let planar = restrict_2d(&t.d1);
    println!(
        "planar D1 ={}dominant direction {:.2} degrees from the x axis",
        planar,
        principal_angle(&planar).to_degrees()
    );
    Ok(())
}
