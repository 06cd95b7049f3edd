package org.apache.hadoop.yarn.api;

public class AppManagerStub {
    /**
     * Serializes the submission and sends it to the resource manager.
     */
    public String submitApplication(String jobId) {
        LOG.debug("Marshalling submission for " + jobId);
        return jobId;
    }

    /**
     * Requests an application report from the resource manager.
     */
    public String getAppReport(String jobId) {
        return jobId;
    }
}
