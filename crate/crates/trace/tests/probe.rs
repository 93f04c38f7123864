use cylinder::SurfPoint;
use exactnum::rat_int;
use tiling::{build, VertexClass};
use trace::{cusp_sources, witness, Witness};

#[test]
fn probe() {
    let t = build(5).unwrap();
    for (i, c) in t.cyls.iter().enumerate() {
        println!("cyl {i}: ({},{},{}),({},{},{})  w={} h={}", c.w1, c.s1, c.t1, c.w2, c.s2, c.t2, t.width(i), t.height(i));
    }
    let body = t.cyls.iter().position(|c| (c.w1, c.s1, c.w2, c.s2) == (1, 1, 2, 2)).unwrap();
    println!("body index {body}");
    let sources = cusp_sources(&t);
    println!("sources: {}", sources.len());
    for x in [0u64, 3] {
        println!("class at ({body},{x},0): {:?}", t.vertex_class_at(body, x, 0));
        let p = SurfPoint { cyl: body, x: rat_int(x as i64), y: rat_int(0) };
        let start = std::time::Instant::now();
        let w = witness(&t, &p, &sources, 20).unwrap();
        match w {
            Witness::Found(seg) => println!("({body},{x},0): FOUND dir {:?} len {} [{:?}]", seg.direction, seg.length, start.elapsed()),
            Witness::Unknown => println!("({body},{x},0): UNKNOWN at B=20 [{:?}]", start.elapsed()),
        }
    }
    for v in &t.vertices {
        if v.class != VertexClass::NonCuspPole { continue; }
        let (c, x, y) = v.position;
        let p = SurfPoint { cyl: c, x: rat_int(x as i64), y: rat_int(y as i64) };
        let w = witness(&t, &p, &sources, 12).unwrap();
        let tag = match w { Witness::Found(_) => "lit", Witness::Unknown => "UNKNOWN" };
        println!("ncp ({c},{x},{y}): {tag}");
    }
}
