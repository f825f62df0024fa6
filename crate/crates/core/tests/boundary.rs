use eecrit_core::numeric::{int, rat};
use eecrit_core::region::boundary::{build_region, BoundaryTest};
use eecrit_core::{Point, RegionModel, Scenario};

fn scenarios() -> Vec<Scenario> {
    vec![
        Scenario::classical_slice(int(0)),
        Scenario::classical_slice(rat(1, 2)),
        Scenario::classical_slice(int(1)),
        Scenario::classical_slice(int(2)),
        Scenario::classical_slice(rat(5, 2)),
        Scenario::slice(rat(3, 4), rat(1, 2)).unwrap(),
        Scenario::slice(rat(3, 4), rat(5, 2)).unwrap(),
        Scenario::slice(rat(13, 20), rat(5, 2)).unwrap(),
        Scenario::slice(rat(9, 10), int(2)).unwrap(),
        Scenario::slice(rat(3, 5), rat(11, 4)).unwrap(),
        Scenario::slice(rat(2, 5), int(1)).unwrap(),
        Scenario::slice(rat(3, 2), int(0)).unwrap(),
        Scenario::general(int(1), rat(1, 2)).unwrap(),
        Scenario::general(int(1), int(1)).unwrap(),
        Scenario::general(rat(4, 5), int(2)).unwrap(),
    ]
}

#[test]
fn boundary_agrees_with_membership() {
    let n = 161;
    for s in scenarios() {
        let rb = build_region(&s).unwrap();
        let model = RegionModel::new(&s).unwrap();
        let tol = if rb.approximate { 5e-3 } else { 1e-9 };
        let mut bad = vec![];
        for i in 0..n {
            for j in 0..n {
                let p = Point::new(
                    0.5 * i as f64 / (n - 1) as f64,
                    0.5 * j as f64 / (n - 1) as f64,
                );
                let t = rb.test_point(&p, tol);
                if matches!(t, BoundaryTest::OnBoundary { .. }) {
                    continue;
                }
                let inside = model.classify_f64(&p).inside;
                if inside != (t == BoundaryTest::Inside) {
                    bad.push((p.x, p.y, inside));
                }
            }
        }
        assert!(
            bad.is_empty(),
            "{s}: {} mismatches, e.g. {:?}",
            bad.len(),
            &bad[..bad.len().min(5)]
        );
    }
}

#[test]
fn vertices_lie_on_their_pieces() {
    for s in scenarios() {
        let rb = build_region(&s).unwrap();
        if rb.approximate {
            continue;
        }
        for v in &rb.vertices {
            let on = rb
                .pieces
                .iter()
                .any(|p| p.start == v.point || p.end == v.point);
            assert!(on, "{s}: vertex {} not a piece endpoint", v.label);
        }
        for p in &rb.pieces {
            for q in [&p.start, &p.end] {
                let r = eecrit_core::region::boundary::piece_residual(p, q).to_f64();
                assert!(r.abs() < 1e-12, "{s}: piece {} residual {r}", p.id);
            }
        }
    }
}

#[test]
fn export_examples() {
    use eecrit_core::region::export::{export, from_json, ExportFormat};
    let rb = build_region(&Scenario::classical_slice(int(1))).unwrap();
    let svg = export(&rb, ExportFormat::Svg).unwrap();
    assert!(svg.contains(r#"data-x="0.25" data-y="0.25""#));
    assert!(svg.contains("L^4 L^4"));
    assert!(svg.contains("stroke-dasharray"));
    for s in scenarios() {
        let rb = build_region(&s).unwrap();
        let back = from_json(&export(&rb, ExportFormat::Json).unwrap()).unwrap();
        assert_eq!(back, rb, "{s}");
    }
    let rb = build_region(&Scenario::classical_slice(int(0))).unwrap();
    let csv = export(&rb, ExportFormat::Csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("piece_id,kind,x,y,strict"));
    assert!(lines.all(|l| l.ends_with(",false")));
    let arc_rows = csv.lines().filter(|l| l.starts_with("curve,")).count();
    assert_eq!(arc_rows, 256);
}
