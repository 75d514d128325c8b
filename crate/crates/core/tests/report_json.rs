use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varcount_core::gen::{random_spec, small_fields, Limits};
use varcount_core::report::{report_to_json, ReportJson};
use varcount_core::{count_points, CountOptions};

#[test]
fn report_json_round_trips_byte_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fields = small_fields();
    for _ in 0..50 {
        let f = &fields[rng.gen_range(0..fields.len())];
        let spec = random_spec(&mut rng, f, &Limits::default());
        let report = count_points(&spec, &CountOptions::default()).unwrap();
        let text = report_to_json(&report);
        let back = ReportJson::parse(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.total, report.total.to_string());
        assert_eq!(back.levels.len(), spec.blocks());
    }
}
