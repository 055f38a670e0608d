import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { Calculator } from "../src/view.js";

interface FetchCall {
  url: string;
  body: Record<string, unknown>;
}

function pricePayload(overrides: Record<string, unknown> = {}) {
  return {
    price: 19.416219143170468,
    price_display: "19.42",
    method: "analytic",
    inputs: {
      option_type: "put",
      spot: 100,
      strike: 120,
      rate_pct: 2,
      vol_pct: 0.5,
      purchase_date: "2014-02-06",
      expiry_date: "2014-05-06",
      time_days: 89,
      maturity_years: 0.24383561643835616,
    },
    diagnostics: {},
    ...overrides,
  };
}

function okResponse(payload: unknown) {
  return {
    ok: true,
    status: 200,
    json: async () => payload,
    text: async () => JSON.stringify(payload),
  } as Response;
}

function errorResponse(status: number, payload: unknown) {
  return {
    ok: false,
    status,
    json: async () => payload,
    text: async () => JSON.stringify(payload),
  } as Response;
}

let calls: FetchCall[];
let root: HTMLElement;

function installFetch(handler: (call: FetchCall) => Response | Promise<Response>) {
  calls = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string, init?: RequestInit) => {
      const call = { url, body: JSON.parse((init?.body as string) ?? "{}") };
      calls.push(call);
      return handler(call);
    }),
  );
}

function mount(): Calculator {
  root = document.createElement("div");
  document.body.appendChild(root);
  return new Calculator(root, { day: 6, month: 2, year: 2014 });
}

function setInput(id: string, value: string) {
  const input = root.querySelector<HTMLInputElement>(`#${id}`)!;
  input.value = value;
  input.dispatchEvent(new Event("input", { bubbles: true }));
}

function setSelect(id: string, value: string) {
  const select = root.querySelector<HTMLSelectElement>(`#${id}`)!;
  select.value = value;
  select.dispatchEvent(new Event("change", { bubbles: true }));
}

function fillClassicForm() {
  setInput("spot", "100");
  setInput("strike", "120");
  setInput("rate", "2");
  setInput("vol", "0.5");
  // Purchase stays at the mount default 2014-02-06.
  setSelect("expiry-day", "6");
  setSelect("expiry-month", "5");
  setSelect("expiry-year", "2014");
}

function choosePut() {
  const radio = root.querySelector<HTMLInputElement>('input[name="display"][value="put"]')!;
  radio.checked = true;
  radio.dispatchEvent(new Event("change", { bubbles: true }));
}

function clickResults() {
  root
    .querySelector<HTMLFormElement>("#calculator")!
    .dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

async function settle() {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

beforeEach(() => {
  document.body.innerHTML = "";
});

afterEach(() => {
  vi.unstubAllGlobals();
  vi.useRealTimers();
});

describe("form gating", () => {
  it("starts with the call radio selected and submit disabled", () => {
    installFetch(() => okResponse(pricePayload()));
    mount();
    const call = root.querySelector<HTMLInputElement>('input[name="display"][value="call"]')!;
    expect(call.checked).toBe(true);
    expect(root.querySelector<HTMLButtonElement>("#results-btn")!.disabled).toBe(true);
  });

  it("stays disabled while volatility is empty, enables once complete", () => {
    installFetch(() => okResponse(pricePayload()));
    mount();
    setInput("spot", "100");
    setInput("strike", "120");
    setInput("rate", "2");
    setSelect("expiry-month", "5");
    const button = root.querySelector<HTMLButtonElement>("#results-btn")!;
    expect(button.disabled).toBe(true); // vol_pct still empty
    setInput("vol", "0.5");
    expect(button.disabled).toBe(false);
  });

  it("treats expiry equal to purchase as invalid", () => {
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    setSelect("expiry-month", "2"); // back to 2014-02-06
    expect(root.querySelector<HTMLButtonElement>("#results-btn")!.disabled).toBe(true);
  });
});

describe("round trip", () => {
  it("sends the classic request and renders the echo row", async () => {
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    clickResults();
    await settle();

    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("/api/price");
    expect(calls[0]!.body).toEqual({
      option_type: "call",
      spot: 100,
      strike: 120,
      rate_pct: 2,
      vol_pct: 0.5,
      purchase_date: "2014-02-06",
      expiry_date: "2014-05-06",
    });

    const row = Array.from(
      root.querySelectorAll<HTMLElement>("#inputs-table tbody td"),
    ).map((cell) => cell.textContent);
    expect(row).toEqual(["120", "100", "89", "0.5", "2", "Call Option"]);
    expect(root.querySelector("#result")!.hasAttribute("hidden")).toBe(false);
  });

  it("shows the API's display price verbatim for the put", async () => {
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    choosePut();
    clickResults();
    await settle();

    expect(calls[0]!.body.option_type).toBe("put");
    expect(root.querySelector("#price-cell")!.textContent).toBe("19.42");
    const type = root.querySelector("#echo-type")!.textContent;
    expect(type).toBe("Put Option");
  });

  it("renders time days from the API echo, not a local computation", async () => {
    installFetch(() => okResponse(pricePayload({
      inputs: { ...pricePayload().inputs, time_days: 1234 },
    })));
    mount();
    fillClassicForm();
    clickResults();
    await settle();
    expect(root.querySelector("#echo-days")!.textContent).toBe("1234");
  });
});

describe("failure handling", () => {
  it("renders 400 field errors inline next to the offending input", async () => {
    installFetch(() =>
      errorResponse(400, {
        errors: [{ field: "vol_pct", message: "sigma: must be > 0" }],
      }),
    );
    mount();
    fillClassicForm();
    clickResults();
    await settle();

    const slot = root.querySelector<HTMLElement>('.field-error[data-field="vol"]')!;
    expect(slot.hidden).toBe(false);
    expect(slot.textContent).toContain("sigma");
  });

  it("offers a retry banner on network failure, and retry re-submits", async () => {
    let failing = true;
    installFetch(() => {
      if (failing) throw new TypeError("fetch failed");
      return okResponse(pricePayload());
    });
    mount();
    fillClassicForm();
    clickResults();
    await settle();

    const banner = root.querySelector<HTMLElement>("#error-banner")!;
    expect(banner.hidden).toBe(false);

    failing = false;
    root.querySelector<HTMLButtonElement>("#retry-btn")!.click();
    await settle();
    expect(calls).toHaveLength(2);
    expect(root.querySelector("#price-cell")!.textContent).toBe("19.42");
    expect(banner.hidden).toBe(true);
  });

  it("raises a contract-violation banner if the API ever returns a negative price", async () => {
    installFetch(() =>
      okResponse(pricePayload({ price: -19.42, price_display: "-19.42" })),
    );
    mount();
    fillClassicForm();
    clickResults();
    await settle();

    const banner = root.querySelector<HTMLElement>("#violation-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("negative");
    expect(root.querySelector("#result")!.hasAttribute("hidden")).toBe(true);
  });
});

describe("what-if auto resubmit", () => {
  it("debounces a burst of edits into a single request", async () => {
    vi.useFakeTimers();
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    clickResults();
    await vi.advanceTimersByTimeAsync(0);
    expect(calls).toHaveLength(1);

    for (const vol of ["10", "20", "30", "40", "50"]) {
      setInput("vol", vol);
      await vi.advanceTimersByTimeAsync(40); // 5 edits inside 200 ms
    }
    expect(calls).toHaveLength(1); // still quiet
    await vi.advanceTimersByTimeAsync(300);
    expect(calls).toHaveLength(2);
    expect(calls[1]!.body.vol_pct).toBe(50);
  });

  it("does not resubmit when nothing changed", async () => {
    vi.useFakeTimers();
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    clickResults();
    await vi.advanceTimersByTimeAsync(0);
    expect(calls).toHaveLength(1);

    setInput("vol", "0.5"); // same value as submitted
    await vi.advanceTimersByTimeAsync(1000);
    expect(calls).toHaveLength(1);
  });

  it("does not auto-submit before the first successful result", async () => {
    vi.useFakeTimers();
    installFetch(() => okResponse(pricePayload()));
    mount();
    fillClassicForm();
    await vi.advanceTimersByTimeAsync(1000);
    expect(calls).toHaveLength(0);
  });

  it("dims the previous result while the fresh one is in flight", async () => {
    vi.useFakeTimers();
    let release: (() => void) | null = null;
    installFetch(async () => {
      if (release === null) return okResponse(pricePayload());
      await new Promise<void>((resolve) => {
        release = resolve;
      });
      return okResponse(pricePayload());
    });
    mount();
    fillClassicForm();
    clickResults();
    await vi.advanceTimersByTimeAsync(0);
    const result = root.querySelector<HTMLElement>("#result")!;
    expect(result.classList.contains("stale")).toBe(false);

    release = () => {};
    setInput("vol", "60");
    await vi.advanceTimersByTimeAsync(300);
    expect(result.classList.contains("stale")).toBe(true);
  });
});
