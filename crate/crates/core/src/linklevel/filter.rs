//! L1 sliding-window averaging and exponential L3 filtering (dB domain).

/// Fixed-length sliding mean. Before the window fills it averages what it has.
#[derive(Debug, Clone)]
pub struct SlidingMean {
    buf: Vec<f64>,
    next: usize,
    len: usize,
    sum: f64,
}

impl SlidingMean {
    pub fn new(window: usize) -> Self {
        assert!(window > 0, "window must be positive");
        Self {
            buf: vec![0.0; window],
            next: 0,
            len: 0,
            sum: 0.0,
        }
    }

    pub fn push(&mut self, v: f64) {
        if self.len == self.buf.len() {
            self.sum -= self.buf[self.next];
        } else {
            self.len += 1;
        }
        self.buf[self.next] = v;
        self.sum += v;
        self.next = (self.next + 1) % self.buf.len();
    }

    pub fn mean(&self) -> Option<f64> {
        (self.len > 0).then(|| self.sum / self.len as f64)
    }

    pub fn clear(&mut self) {
        self.next = 0;
        self.len = 0;
        self.sum = 0.0;
    }
}

/// Filter weight of a new measurement for filter coefficient `k`.
pub fn l3_coefficient(k: u32) -> f64 {
    0.5f64.powf(k as f64 / 4.0)
}

/// One L3 update; the first measurement initializes the filter.
pub fn l3_filter(prev: Option<f64>, new: f64, k: u32) -> f64 {
    match prev {
        None => new,
        Some(p) => {
            let a = l3_coefficient(k);
            (1.0 - a) * p + a * new
        }
    }
}

/// Per-cell L1 windows feeding per-cell L3 values.
///
/// All cells are sampled together, so the windows share one write position.
#[derive(Debug, Clone)]
pub struct FilterState {
    n_cells: usize,
    window: usize,
    l1: Vec<f64>,
    l1_sum: Vec<f64>,
    next: usize,
    filled: usize,
    l3: Vec<f64>,
    l3_started: bool,
    k: u32,
}

impl FilterState {
    pub fn new(n_cells: usize, l1_window: usize, k: u32) -> Self {
        assert!(l1_window > 0, "window must be positive");
        Self {
            n_cells,
            window: l1_window,
            l1: vec![0.0; n_cells * l1_window],
            l1_sum: vec![0.0; n_cells],
            next: 0,
            filled: 0,
            l3: vec![f64::NEG_INFINITY; n_cells],
            l3_started: false,
            k,
        }
    }

    pub fn push_l1(&mut self, rsrp: &[f64]) {
        debug_assert_eq!(rsrp.len(), self.n_cells);
        let full = self.filled == self.window;
        let slot = &mut self.l1[self.next * self.n_cells..(self.next + 1) * self.n_cells];
        for ((old, sum), &v) in slot.iter_mut().zip(self.l1_sum.iter_mut()).zip(rsrp) {
            if full {
                *sum -= *old;
            }
            *old = v;
            *sum += v;
        }
        if !full {
            self.filled += 1;
        }
        self.next = (self.next + 1) % self.window;
    }

    pub fn l1_mean(&self, cell: usize) -> Option<f64> {
        (self.filled > 0).then(|| self.l1_sum[cell] / self.filled as f64)
    }

    /// Feeds every cell's current L1 mean into its L3 filter.
    pub fn update_l3(&mut self) {
        if self.filled == 0 {
            return;
        }
        let n = self.filled as f64;
        let a = l3_coefficient(self.k);
        for (f, &s) in self.l3.iter_mut().zip(&self.l1_sum) {
            let m = s / n;
            *f = if self.l3_started { (1.0 - a) * *f + a * m } else { m };
        }
        self.l3_started = true;
    }

    pub fn l3(&self, cell: usize) -> Option<f64> {
        self.l3_started.then(|| self.l3[cell])
    }

    /// L3 values, `-inf` before the first update.
    pub fn l3_values(&self) -> &[f64] {
        &self.l3
    }
}
