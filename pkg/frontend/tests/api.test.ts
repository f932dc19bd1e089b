import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, splitCurie } from "../src/api";
import { fixtureFetch, miniFixture } from "./stub";

describe("splitCurie", () => {
  it("splits scheme and local id", () => {
    expect(splitCurie("MONDO:0020683")).toEqual({
      scheme: "MONDO",
      local: "0020683",
    });
  });

  it("keeps colons inside the local part", () => {
    expect(splitCurie("A:b:c").local).toBe("b:c");
  });

  it("rejects non-CURIEs", () => {
    expect(() => splitCurie("no-colon")).toThrow();
  });
});

describe("ApiClient routing", () => {
  it("asks the node endpoint with scheme/local split", async () => {
    const log: string[] = [];
    const client = new ApiClient("", fixtureFetch(miniFixture(), { log }));
    const node = await client.node("Entrez:1954");
    expect(node.node_labels).toEqual(["Gene"]);
    expect(log[0]).toContain("node_id=1954");
    expect(log[0]).toContain("node_id_scheme=Entrez");
  });

  it("propagates HTTP errors as ApiError with status", async () => {
    const client = new ApiClient("", fixtureFetch(miniFixture()));
    await expect(client.node("Entrez:0")).rejects.toBeInstanceOf(ApiError);
    await expect(client.node("Entrez:0")).rejects.toMatchObject({
      status: 404,
    });
  });

  it("schema carries label and predicate counts", async () => {
    const client = new ApiClient("", fixtureFetch(miniFixture()));
    const schema = await client.schema();
    expect(schema.node_count).toBe(5);
    expect(schema.labels["miRNA"]).toBe(2);
    expect(schema.predicates["interacts_with"]).toBe(1);
  });

  it("relationship requests carry direction and paging", async () => {
    const log: string[] = [];
    const client = new ApiClient("", fixtureFetch(miniFixture(), { log }));
    await client.relationships("Entrez:1954", "out", 10, 5);
    expect(log[0]).toContain("direction=out");
    expect(log[0]).toContain("limit=10");
    expect(log[0]).toContain("offset=5");
  });
});
