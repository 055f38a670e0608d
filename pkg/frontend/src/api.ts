/**
 * Thin client for the pricing service. The UI talks to exactly two
 * same-origin endpoints: POST /api/price and GET /api/health.
 */

import type { PriceRequestBody } from "./model.js";

export interface InputsEcho {
  option_type: string;
  spot: number;
  strike: number;
  rate_pct: number;
  vol_pct: number;
  purchase_date: string;
  expiry_date: string;
  time_days: number;
  maturity_years: number;
}

export interface PriceResponseBody {
  price: number;
  price_display: string;
  method: string;
  inputs: InputsEcho;
  diagnostics: Record<string, unknown>;
}

export interface FieldError {
  field: string;
  message: string;
}

export type ApiFailure =
  | { kind: "fields"; errors: FieldError[] }
  | { kind: "server"; status: number; message: string }
  | { kind: "network"; message: string }
  | { kind: "aborted" };

export class PriceRequestError extends Error {
  constructor(public failure: ApiFailure) {
    super(failure.kind);
  }
}

export async function postPrice(
  body: PriceRequestBody,
  signal?: AbortSignal,
): Promise<PriceResponseBody> {
  let response: Response;
  try {
    response = await fetch("/api/price", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") {
      throw new PriceRequestError({ kind: "aborted" });
    }
    throw new PriceRequestError({
      kind: "network",
      message: error instanceof Error ? error.message : String(error),
    });
  }

  if (response.status === 400) {
    const payload = (await response.json()) as { errors?: FieldError[] };
    throw new PriceRequestError({ kind: "fields", errors: payload.errors ?? [] });
  }
  if (!response.ok) {
    throw new PriceRequestError({
      kind: "server",
      status: response.status,
      message: await response.text(),
    });
  }
  return (await response.json()) as PriceResponseBody;
}

export async function checkHealth(): Promise<boolean> {
  try {
    const response = await fetch("/api/health");
    return response.ok;
  } catch {
    return false;
  }
}
