use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use scpa_core::colorspace::{convert_image, ArithPath, ColorMatrix, ColorSpace};
use scpa_core::pixel_io::Image;
use scpa_core::scpa::{CostWeights, PeId, Runtime, ScpaError, TaskTable, TraceKind};
use scpa_core::Execution;

fn random_rgb(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = SplitMix64::seed_from_u64(seed);
    Image::new(w, h, 3, (0..w * h * 3).map(|_| rng.gen()).collect()).unwrap()
}

fn run(table: TaskTable, tile_rows: usize, img: &Image) -> (Runtime, BTreeMap<ColorSpace, Image>) {
    let mut rt = Runtime::init(table, tile_rows).unwrap();
    rt.scatter(img).unwrap();
    let out = rt.gather().unwrap();
    (rt, out)
}

#[test]
fn default_array_matches_sequential_conversion() {
    let img = random_rgb(33, 21, 1);
    for tile_rows in [1, 4, 21, 100] {
        let (rt, out) = run(TaskTable::default_array(), tile_rows, &img);
        assert_eq!(out.keys().copied().collect::<Vec<_>>(), vec![ColorSpace::Ycc, ColorSpace::Yiq, ColorSpace::Cmy]);
        for (space, got) in &out {
            let want = convert_image(&img, &ColorMatrix::forward(*space), ArithPath::Q88, Execution::Sequential).unwrap();
            assert_eq!(got, &want, "{space} tile_rows {tile_rows}");
        }
        assert!(rt.is_complete());
    }
}

#[test]
fn trace_is_deterministic_and_gap_free() {
    let img = random_rgb(16, 19, 2);
    let (a, _) = run(TaskTable::default_array(), 5, &img);
    let (b, _) = run(TaskTable::default_array(), 5, &img);
    assert_eq!(a.trace_text(), b.trace_text());

    // Per directed channel, sent and received sequence numbers count up from 0.
    let mut sent: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
    let mut recv: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
    for (i, ev) in a.trace().iter().enumerate() {
        assert_eq!(ev.ordinal, i as u64);
        match ev.kind {
            TraceKind::Send => sent.entry((ev.pe.0, ev.peer.unwrap().0)).or_default().push(ev.seq.unwrap()),
            TraceKind::Receive => recv.entry((ev.peer.unwrap().0, ev.pe.0)).or_default().push(ev.seq.unwrap()),
            _ => {}
        }
    }
    assert_eq!(sent, recv);
    for seqs in sent.values() {
        assert_eq!(*seqs, (0..seqs.len() as u64).collect::<Vec<_>>());
    }
    for stats in a.channel_stats().values() {
        assert_eq!(stats.seq_gaps, 0);
        assert_eq!(stats.sent_messages, stats.received_messages);
        assert_eq!(stats.sent_bytes, stats.received_bytes);
    }
}

#[test]
fn payload_bytes_are_conserved() {
    let img = random_rgb(10, 12, 3);
    let (rt, _) = run(TaskTable::default_array(), 3, &img);
    let image_bytes = img.samples().len() as u64;
    for w in 1..=3 {
        let down = rt.channel_stats()[&(PeId::MASTER, PeId(w))];
        let up = rt.channel_stats()[&(PeId(w), PeId::MASTER)];
        // 4 tiles each way; the control message carries no payload.
        assert_eq!(down.sent_messages, 5);
        assert_eq!(up.sent_messages, 5);
        assert_eq!(down.sent_bytes, image_bytes);
        assert_eq!(up.sent_bytes, image_bytes);
    }
}

#[test]
fn scatter_copies_the_image() {
    let mut img = random_rgb(8, 8, 4);
    let mut rt = Runtime::init(TaskTable::default_array(), 2).unwrap();
    rt.scatter(&img).unwrap();
    let snapshot = img.clone();
    img.samples_mut().fill(0);
    let out = rt.gather().unwrap();
    let want = convert_image(&snapshot, &ColorMatrix::forward(ColorSpace::Cmy), ArithPath::Q88, Execution::Sequential)
        .unwrap();
    assert_eq!(out[&ColorSpace::Cmy], want);
}

#[test]
fn lifecycle_errors() {
    let img = random_rgb(4, 4, 5);
    let mut rt = Runtime::init(TaskTable::default_array(), 2).unwrap();
    assert!(matches!(rt.gather(), Err(ScpaError::NotScattered)));
    assert!(matches!(rt.ledger_report(), Err(ScpaError::RunIncomplete)));
    rt.scatter(&img).unwrap();
    assert!(matches!(rt.scatter(&img), Err(ScpaError::AlreadyScattered)));
    rt.gather().unwrap();
    assert!(matches!(rt.gather(), Err(ScpaError::ResultsConsumed)));
    let gray = Image::filled(4, 4, 1, 0).unwrap();
    let mut rt = Runtime::init(TaskTable::default_array(), 2).unwrap();
    assert!(matches!(rt.scatter(&gray), Err(ScpaError::UnsupportedInput(1))));
    assert!(Runtime::init(TaskTable::default_array(), 0).is_err());
}

#[test]
fn ledger_ordering_and_ipc_direction() {
    let img = random_rgb(20, 20, 6);
    let table = TaskTable::with_workers(&ColorSpace::ALL.map(|s| (s, ArithPath::Real))).unwrap();
    let (rt, _) = run(table, 4, &img);
    let report = rt.ledger_report().unwrap();
    let cmy = report.row(ColorSpace::Cmy).unwrap();
    assert!((cmy.pixels_per_cycle - 1.0 / 3.0).abs() < 1e-12);
    for row in &report.rows {
        assert_eq!(row.pixels, 400);
        assert!(row.pixels_per_cycle_with_ipc < row.pixels_per_cycle);
        if row.conversion != ColorSpace::Cmy {
            assert!(cmy.pixels_per_cycle > row.pixels_per_cycle);
        }
    }
    let csv = report.to_csv();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn heavier_weights_scale_compute_cycles() {
    let img = random_rgb(6, 6, 7);
    let weights = CostWeights { multiply: 4, ..CostWeights::default() };
    let mut rt = Runtime::with_weights(TaskTable::default_array(), 3, weights).unwrap();
    rt.scatter(&img).unwrap();
    rt.gather().unwrap();
    let report = rt.ledger_report().unwrap();
    // 9 multiplies at 4 + 6 adds + 3 compares = 45 cycles per pixel.
    assert!((report.row(ColorSpace::Ycc).unwrap().pixels_per_cycle - 1.0 / 45.0).abs() < 1e-12);
    assert!((report.row(ColorSpace::Cmy).unwrap().pixels_per_cycle - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn table_text_round_trip_and_errors() {
    let text = "# pe, task, conversion, path\n0, master, -, -\n1, rgb_to_yuv, yuv, real\n2, rgb_to_cmy, cmy, q88\n";
    let table = TaskTable::parse(text).unwrap();
    assert_eq!(table.pe_count(), 3);
    assert_eq!(TaskTable::parse(&table.to_text()).unwrap(), table);

    for (bad, line) in [
        ("1, rgb_to_ycc, ycc, q88\n", None),
        ("0, master, -, -\nx, rgb_to_ycc, ycc, q88\n", Some(2)),
        ("0, master, -, -\n\n# note\n1, rgb_to_ycc, ycc\n", Some(4)),
        ("0, master, -, -\n1, rgb_to_ycc, hsv, q88\n", Some(2)),
        ("0, master, -, -\n1, rgb_to_ycc, ycc, q88\n1, rgb_to_cmy, cmy, q88\n", None),
        ("0, master, -, -\n", None),
    ] {
        match TaskTable::parse(bad) {
            Err(ScpaError::MalformedTable { line: got, .. }) => assert_eq!(got, line, "{bad:?}"),
            other => panic!("{bad:?} gave {other:?}"),
        }
    }
}
