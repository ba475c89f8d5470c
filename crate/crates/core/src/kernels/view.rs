use std::marker::PhantomData;

/// Read-only column-major view with an explicit leading dimension.
#[derive(Clone, Copy)]
pub struct PanelRef<'a> {
    ptr: *const f64,
    rows: usize,
    cols: usize,
    ld: usize,
    _marker: PhantomData<&'a [f64]>,
}

// SAFETY: a PanelRef is a shared borrow of f64s.
unsafe impl Send for PanelRef<'_> {}
unsafe impl Sync for PanelRef<'_> {}

/// Mutable column-major view with an explicit leading dimension.
pub struct PanelMut<'a> {
    ptr: *mut f64,
    rows: usize,
    cols: usize,
    ld: usize,
    _marker: PhantomData<&'a mut [f64]>,
}

unsafe impl Send for PanelMut<'_> {}

fn check_extent(len: usize, rows: usize, cols: usize, ld: usize) {
    assert!(ld >= rows.max(1), "leading dimension {ld} smaller than {rows} rows");
    if rows > 0 && cols > 0 {
        assert!((cols - 1) * ld + rows <= len, "{rows} x {cols} view with ld {ld} exceeds {len} elements");
    }
}

impl<'a> PanelRef<'a> {
    pub fn new(data: &'a [f64], rows: usize, cols: usize, ld: usize) -> Self {
        check_extent(data.len(), rows, cols, ld);
        PanelRef {
            ptr: data.as_ptr(),
            rows,
            cols,
            ld,
            _marker: PhantomData,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ld(&self) -> usize {
        self.ld
    }

    pub fn as_ptr(&self) -> *const f64 {
        self.ptr
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        // SAFETY: in bounds by construction
        unsafe { *self.ptr.add(i + j * self.ld) }
    }

    /// Column `j` as a contiguous slice.
    #[inline]
    pub fn col(&self, j: usize) -> &'a [f64] {
        assert!(j < self.cols);
        // SAFETY: a column of a valid view is `rows` contiguous elements
        unsafe { std::slice::from_raw_parts(self.ptr.add(j * self.ld), self.rows) }
    }

    pub fn submatrix(&self, row: usize, col: usize, rows: usize, cols: usize) -> PanelRef<'a> {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "submatrix out of bounds");
        PanelRef {
            // SAFETY: offset stays within the parent view
            ptr: if rows == 0 || cols == 0 { self.ptr } else { unsafe { self.ptr.add(row + col * self.ld) } },
            rows,
            cols,
            ld: self.ld,
            _marker: PhantomData,
        }
    }
}

impl<'a> PanelMut<'a> {
    pub fn new(data: &'a mut [f64], rows: usize, cols: usize, ld: usize) -> Self {
        check_extent(data.len(), rows, cols, ld);
        PanelMut {
            ptr: data.as_mut_ptr(),
            rows,
            cols,
            ld,
            _marker: PhantomData,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ld(&self) -> usize {
        self.ld
    }

    pub fn as_mut_ptr(&mut self) -> *mut f64 {
        self.ptr
    }

    pub fn rb(&self) -> PanelRef<'_> {
        PanelRef {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            ld: self.ld,
            _marker: PhantomData,
        }
    }

    pub fn rb_mut(&mut self) -> PanelMut<'_> {
        PanelMut {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            ld: self.ld,
            _marker: PhantomData,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        unsafe { *self.ptr.add(i + j * self.ld) }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        unsafe { *self.ptr.add(i + j * self.ld) = v }
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        assert!(j < self.cols);
        unsafe { std::slice::from_raw_parts_mut(self.ptr.add(j * self.ld), self.rows) }
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        assert!(j < self.cols);
        unsafe { std::slice::from_raw_parts(self.ptr.add(j * self.ld), self.rows) }
    }

    /// Rows `from..` of column `target` mutably, and the same rows of column
    /// `source < target` immutably.
    #[inline]
    pub fn two_cols(&mut self, target: usize, source: usize, from: usize) -> (&mut [f64], &[f64]) {
        assert!(source < target && target < self.cols && from <= self.rows);
        let len = self.rows - from;
        // SAFETY: distinct columns of a view never overlap (ld >= rows)
        unsafe {
            (
                std::slice::from_raw_parts_mut(self.ptr.add(from + target * self.ld), len),
                std::slice::from_raw_parts(self.ptr.add(from + source * self.ld), len),
            )
        }
    }

    /// Rows `from..` of column `j` mutably, with rows `from..` of columns
    /// `..j` as a read-only view.
    #[inline]
    pub fn col_and_prefix(&mut self, j: usize, from: usize) -> (&mut [f64], PanelRef<'_>) {
        assert!(j < self.cols && from <= self.rows);
        let len = self.rows - from;
        // SAFETY: columns before j end before column j starts (ld >= rows)
        unsafe {
            let base = self.ptr.add(from);
            (
                std::slice::from_raw_parts_mut(base.add(j * self.ld), len),
                PanelRef {
                    ptr: base,
                    rows: len,
                    cols: j,
                    ld: self.ld,
                    _marker: PhantomData,
                },
            )
        }
    }

    pub fn submatrix(self, row: usize, col: usize, rows: usize, cols: usize) -> PanelMut<'a> {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "submatrix out of bounds");
        PanelMut {
            ptr: if rows == 0 || cols == 0 { self.ptr } else { unsafe { self.ptr.add(row + col * self.ld) } },
            rows,
            cols,
            ld: self.ld,
            _marker: PhantomData,
        }
    }

    /// Splits into rows `..at` and rows `at..`; the halves never overlap.
    pub fn split_at_row(self, at: usize) -> (PanelMut<'a>, PanelMut<'a>) {
        assert!(at <= self.rows);
        let top = PanelMut {
            ptr: self.ptr,
            rows: at,
            cols: self.cols,
            ld: self.ld,
            _marker: PhantomData,
        };
        let bottom = PanelMut {
            ptr: if at == self.rows { self.ptr } else { unsafe { self.ptr.add(at) } },
            rows: self.rows - at,
            cols: self.cols,
            ld: self.ld,
            _marker: PhantomData,
        };
        (top, bottom)
    }

    pub fn into_ref(self) -> PanelRef<'a> {
        PanelRef {
            ptr: self.ptr,
            rows: self.rows,
            cols: self.cols,
            ld: self.ld,
            _marker: PhantomData,
        }
    }
}
